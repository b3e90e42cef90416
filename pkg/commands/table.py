from core.config import TableConfig, build_options
from core.config_manager import config_manager
from core.fileio import write_json
from experiment.results_logger import build_report, emit_results
from experiment.scaling_engine import depth_chi_table, load_records
from .base import BaseCommand


class Command(BaseCommand):
    help = '深度 → χ 表格：每個深度下 E_χ 與 F 呈線性關係的 χ'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int)
        parser.add_argument('--max-depth', type=int)
        parser.add_argument('--max-chi', type=int)
        parser.add_argument('--r2-threshold', type=float)
        parser.add_argument('--sigma-grid')
        parser.add_argument('--mu', type=float)
        parser.add_argument('--seeds', type=int)
        parser.add_argument('--base-seed', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--from-csv', help='由既有掃描 CSV 重建表格，不重新計算')
        parser.add_argument('--out-csv')
        parser.add_argument('--out-report')
        self.add_optimizer_arguments(parser, prefix='mpe-')
        self.add_optimizer_arguments(parser, prefix='fit-')

    def build_config(self, options) -> TableConfig:
        scan_defaults = config_manager.get_scan_config()
        table_defaults = config_manager.get_table_config()
        return build_options(
            TableConfig,
            n=options.get('n'),
            max_depth=options.get('max_depth') or table_defaults['max_depth'],
            max_chi=options.get('max_chi') or table_defaults['max_chi'],
            r2_threshold=options.get('r2_threshold') or table_defaults['r2_threshold'],
            sigma_grid=options.get('sigma_grid') or scan_defaults['sigma_grid'],
            mu=options['mu'] if options.get('mu') is not None else scan_defaults['mu'],
            seeds=options.get('seeds') or scan_defaults['seeds'],
            base_seed=options.get('base_seed'),
            workers=options.get('workers') or scan_defaults['workers'],
            dense_cap=scan_defaults['dense_cap'],
            mpe=self.mpe_options(options, 'mpe-'),
            fit=self.fit_options(options, 'fit-'),
        )

    def handle(self, **options):
        config = self.build_config(options)
        records = load_records(options['from_csv']) if options.get('from_csv') else None
        table = depth_chi_table(config, records)
        if options.get('out_csv'):
            emit_results(table.records, table.reports, options['out_csv'], options.get('out_report'),
                         config=config.model_dump(), table=table.rows)
        elif options.get('out_report'):
            write_json(options['out_report'],
                       build_report(table.reports, config.model_dump(), table.rows, len(table.records)))
        self.stdout.write('D\tlinear χ\targmax χ\treference')
        for row in table.rows:
            linear = ','.join(str(c) for c in row.linear_chis) or '-'
            reference = ','.join(str(c) for c in row.reference_chis) or '-'
            self.stdout.write(f'{row.depth}\t{linear}\t{row.argmax_chi}\t{reference}')
