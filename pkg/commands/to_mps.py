from circuits.equivalence import circuit_to_mps
from circuits.schema import load_circuit
from mps.schema import save_mps
from .base import BaseCommand


class Command(BaseCommand):
    help = '單層線路 → 鍵維度 2 的 MPS'

    def add_arguments(self, parser):
        parser.add_argument('--circuit', required=True)
        parser.add_argument('--out', required=True)

    def handle(self, **options):
        phi = circuit_to_mps(load_circuit(options['circuit']))
        save_mps(phi, options['out'])
        self.stdout.write(f'已寫出 N={phi.n}，鍵維度 {phi.bond_dims}: {options["out"]}')
