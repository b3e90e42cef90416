from core.constants import DEFAULT_MU, RPS_AMPLITUDE_CONVENTION
from mps.schema import save_dense_state
from states.rps import RpsSpec, generalized_rps
from .base import BaseCommand


class Command(BaseCommand):
    help = '產生廣義隨機純態'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--mu', type=float, default=DEFAULT_MU)
        parser.add_argument('--sigma', type=float, required=True)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--out', required=True)

    def handle(self, **options):
        spec = RpsSpec.build(n_qubits=options['n'], mu=options['mu'],
                             sigma=options['sigma'], seed=options['seed'])
        meta = {**spec.model_dump(), 'convention': RPS_AMPLITUDE_CONVENTION}
        save_dense_state(generalized_rps(spec), options['out'], meta=meta)
        self.stdout.write(f'已寫出: {options["out"]}')
