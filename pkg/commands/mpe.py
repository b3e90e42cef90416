import logging

from measures.entanglement import chi_mpe
from mps.schema import load_dense_state, save_mps
from .base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = '計算態的 χ-MPE（bits）'

    def add_arguments(self, parser):
        parser.add_argument('--state', required=True, help='稠密態 JSON')
        parser.add_argument('--chi', type=int, required=True, help='虛擬鍵維度')
        parser.add_argument('--workers', type=int, help='並行重啟數')
        parser.add_argument('--out-mps', help='寫出最佳 MPS 的路徑')
        self.add_optimizer_arguments(parser)

    def handle(self, **options):
        psi = load_dense_state(options['state'])
        result = chi_mpe(psi, options['chi'], self.mpe_options(options))
        if options.get('out_mps'):
            save_mps(result.best_mps, options['out_mps'])
        if not result.converged:
            logger.warning('最佳重啟未收斂，數值為上界')
        self.stdout.write(f'{result.value_bits:.12f}')
