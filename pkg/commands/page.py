from states.rps import mean_half_chain_entropy, page_entropy_reference
from .base import BaseCommand


class Command(BaseCommand):
    help = '隨機純態的平均半鏈糾纏熵與 Page 參考值比較'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--samples', type=int, default=100)
        parser.add_argument('--mu', type=float, default=0.0)
        parser.add_argument('--sigma', type=float, default=1.0)
        parser.add_argument('--seed', type=int, default=0)

    def handle(self, **options):
        reference = page_entropy_reference(options['n'])
        mean = mean_half_chain_entropy(options['n'], options['samples'], options['mu'],
                                       options['sigma'], options['seed'])
        deviation = (mean - reference) / reference
        self.stdout.write(f'mean={mean:.6f} reference={reference:.6f} relative_deviation={deviation:+.4%}')
