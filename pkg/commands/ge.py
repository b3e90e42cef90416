from measures.entanglement import ge_oracle
from mps.schema import load_dense_state
from .base import BaseCommand


class Command(BaseCommand):
    help = '以單位元座標上升暴力計算幾何糾纏（N ≤ 8）'

    def add_arguments(self, parser):
        parser.add_argument('--state', required=True, help='稠密態 JSON')
        parser.add_argument('--restarts', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--max-iters', type=int)
        parser.add_argument('--tol', type=float)

    def handle(self, **options):
        psi = load_dense_state(options['state'])
        self.stdout.write(f'{ge_oracle(psi, self.ge_options(options)):.12f}')
