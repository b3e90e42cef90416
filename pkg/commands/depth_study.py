from core.config import parse_int_list
from core.fileio import write_json
from experiment.scaling_engine import mps_depth_study
from .base import BaseCommand


class Command(BaseCommand):
    help = '以 D 層階梯線路擬合隨機 χ-MPS，比較各深度的 F'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--chi', type=int, required=True)
        parser.add_argument('--depths', default='1,2,3')
        parser.add_argument('--samples', type=int, default=5)
        parser.add_argument('--state-seed', type=int, default=0, help='隨機 MPS 的起始種子')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--out', help='寫出結果 JSON 的路徑')
        self.add_optimizer_arguments(parser)

    def handle(self, **options):
        rows = mps_depth_study(options['n'], options['chi'], parse_int_list(options['depths']),
                               options['samples'], seed=options['state_seed'],
                               options=self.fit_options(options))
        if options.get('out'):
            write_json(options['out'], [row.model_dump() for row in rows])
        for depth in sorted({row.depth for row in rows}):
            values = [row.F_bits for row in rows if row.depth == depth]
            self.stdout.write(f'D={depth}: mean F={sum(values) / len(values):.8f} '
                              f'max F={max(values):.8f} ({len(values)} samples)')
