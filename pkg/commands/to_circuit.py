from circuits.equivalence import mps_to_circuit
from circuits.schema import save_circuit
from mps.schema import load_mps
from .base import BaseCommand


class Command(BaseCommand):
    help = '鍵維度 ≤ 2 的 MPS → 單層階梯線路'

    def add_arguments(self, parser):
        parser.add_argument('--mps', required=True)
        parser.add_argument('--out', required=True)

    def handle(self, **options):
        circuit = mps_to_circuit(load_mps(options['mps']))
        save_circuit(circuit, options['out'])
        self.stdout.write(f'已寫出 N={circuit.n_qubits} 的單層線路: {options["out"]}')
