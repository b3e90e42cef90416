from core.exceptions import InvalidConfigError
from mps.schema import save_dense_state
from states.reference import basis_state, bell_state, ghz_state, w_state
from .base import BaseCommand


class Command(BaseCommand):
    help = '輸出具名參考態（ghz、w、bell、basis）'

    def add_arguments(self, parser):
        parser.add_argument('--name', required=True, choices=['ghz', 'w', 'bell', 'basis'])
        parser.add_argument('--n', type=int, help='ghz 與 w 的位元數')
        parser.add_argument('--bits', help='basis 的位元字串，例如 0110')
        parser.add_argument('--out', required=True)

    def handle(self, **options):
        name = options['name']
        if name == 'bell':
            psi = bell_state()
        elif name == 'basis':
            if not options.get('bits'):
                raise InvalidConfigError('basis 需要 --bits')
            psi = basis_state(options['bits'])
        else:
            if options.get('n') is None:
                raise InvalidConfigError(f'{name} 需要 --n')
            psi = ghz_state(options['n']) if name == 'ghz' else w_state(options['n'])
        save_dense_state(psi, options['out'], meta={'name': name})
        self.stdout.write(f'已寫出 {name}（N={psi.n_qubits}）: {options["out"]}')
