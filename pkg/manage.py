#!/usr/bin/env python
"""χ-MPE toolkit command-line utility."""
import argparse
import importlib
import logging
import sys

COMMANDS = {
    'mpe': 'commands.mpe',
    'ge': 'commands.ge',
    'nlf': 'commands.nlf',
    'fit-circuit': 'commands.fit_circuit',
    'to-mps': 'commands.to_mps',
    'to-circuit': 'commands.to_circuit',
    'rps': 'commands.rps',
    'reference': 'commands.reference',
    'page': 'commands.page',
    'scan': 'commands.scan',
    'table': 'commands.table',
    'depth-study': 'commands.depth_study',
}

logger = logging.getLogger('manage')


def build_parser(stdout=None):
    parser = argparse.ArgumentParser(prog='manage.py', description='χ-MPE 與階梯線路標度實驗工具')
    parser.add_argument('--log-level', help='DEBUG / INFO / WARNING / ERROR')
    parser.add_argument('--log-json', action='store_true', default=None, help='以 JSON 行輸出日誌')
    parser.add_argument('--log-file', help='額外寫入的日誌檔案')
    parser.add_argument('--config', help='JSON 設定檔')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, module_path in COMMANDS.items():
        command = importlib.import_module(module_path).Command(stdout=stdout)
        sub = subparsers.add_parser(name, help=command.help, description=command.help)
        command.add_arguments(sub)
        sub.set_defaults(_command=command)
    return parser


def main(argv=None, stdout=None) -> int:
    """執行子命令並回傳結束代碼"""
    from core.config_manager import config_manager
    from core.constants import EXIT_OK
    from core.exceptions import MpeError
    from core.log_config import configure_logging

    args = build_parser(stdout).parse_args(argv)
    options = dict(vars(args))
    command = options.pop('_command')
    for key in ('command', 'log_level', 'log_json', 'log_file', 'config'):
        options.pop(key, None)

    try:
        if args.config:
            config_manager.load_file(args.config)
        logging_config = config_manager.get_logging_config()
        configure_logging(
            level=args.log_level or logging_config['level'],
            json_format=logging_config['json_format'] if args.log_json is None else args.log_json,
            log_file=args.log_file,
        )
        result = command.handle(**options)
    except MpeError as e:
        logger.error(f"{args.command} 失敗: {e}")
        return e.exit_code
    return EXIT_OK if result is None else int(result)


if __name__ == '__main__':
    sys.exit(main())
