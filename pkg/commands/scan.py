from core.config import ScanConfig, build_options, parse_int_list
from core.config_manager import config_manager
from experiment.results_logger import emit_results
from experiment.scaling_engine import fit_records, scan_scaling
from .base import BaseCommand


class Command(BaseCommand):
    help = '(D, χ, σ) 標度掃描：輸出 E_χ 與 F 的 CSV 以及擬合報告'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--depths', default='1', help='例如 1,2,3')
        parser.add_argument('--chis', default='1,2,3,4,5', help='例如 1,2,3,4,5')
        parser.add_argument('--sigma-grid', help='log:a:b:k、lin:a:b:k 或逗號列表')
        parser.add_argument('--mu', type=float)
        parser.add_argument('--seeds', type=int, help='每個 σ 的樣本數')
        parser.add_argument('--base-seed', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--r2-threshold', type=float)
        parser.add_argument('--out-csv', required=True)
        parser.add_argument('--out-report')
        self.add_optimizer_arguments(parser, prefix='mpe-')
        self.add_optimizer_arguments(parser, prefix='fit-')

    def build_config(self, options) -> ScanConfig:
        defaults = config_manager.get_scan_config()
        return build_options(
            ScanConfig,
            n=options['n'],
            depths=parse_int_list(options['depths']),
            chis=parse_int_list(options['chis']),
            sigma_grid=options.get('sigma_grid') or defaults['sigma_grid'],
            mu=options['mu'] if options.get('mu') is not None else defaults['mu'],
            seeds=options.get('seeds') or defaults['seeds'],
            base_seed=options.get('base_seed'),
            workers=options.get('workers') or defaults['workers'],
            dense_cap=defaults['dense_cap'],
            mpe=self.mpe_options(options, 'mpe-'),
            fit=self.fit_options(options, 'fit-'),
        )

    def handle(self, **options):
        config = self.build_config(options)
        threshold = options.get('r2_threshold') or config_manager.get('R2_THRESHOLD', float)
        records = scan_scaling(config)
        reports = fit_records(records, threshold)
        emit_results(records, reports, options['out_csv'], options.get('out_report'),
                     config=config.model_dump())
        for report in reports:
            self.stdout.write(f'D={report.depth} χ={report.chi}: k={report.slope:.4f} '
                              f'R²={report.r_squared:.6f} {report.classification}')
