import logging

from circuits.schema import load_circuit, save_circuit
from circuits.staircase import fit_circuit
from mps.schema import load_dense_state
from .base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = '擬合 D 層階梯線路並輸出負對數保真度 F（bits）'

    def add_arguments(self, parser):
        parser.add_argument('--state', required=True, help='稠密態 JSON')
        parser.add_argument('--depth', type=int, required=True)
        parser.add_argument('--initial', help='暖啟動線路 JSON')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--out', help='寫出最佳線路的路徑')
        self.add_optimizer_arguments(parser)

    def handle(self, **options):
        psi = load_dense_state(options['state'])
        initial = load_circuit(options['initial']) if options.get('initial') else None
        result = fit_circuit(psi, options['depth'], self.fit_options(options), initial=initial)
        if options.get('out'):
            save_circuit(result.circuit, options['out'])
        if not result.converged:
            logger.warning('最佳重啟未收斂')
        self.stdout.write(f'{result.f_bits:.12f}')
