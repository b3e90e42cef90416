from measures.entanglement import nlf
from mps.schema import load_dense_state
from .base import BaseCommand


class Command(BaseCommand):
    help = '兩個態的負對數保真度 −log₂|⟨ψ|φ⟩|²'

    def add_arguments(self, parser):
        parser.add_argument('--state', required=True)
        parser.add_argument('--other', required=True)

    def handle(self, **options):
        psi = load_dense_state(options['state'])
        phi = load_dense_state(options['other'])
        self.stdout.write(f'{nlf(psi, phi):.12f}')
