"""
levinq 命令行主入口

子命令：
    integrate  单个注册表问题的求积
    table      复现数值表（只含 Levin 列）
    sweep      (w, n) 网格扫描

CSV 写到标准输出或 --out；日志与诊断行写到标准错误。
退出码：0 成功，2 用法/参数错误，3 数值失败、定义域错误或问题不受支持。
"""
import argparse
import logging
import sys
from contextlib import nullcontext
from typing import List, Optional, Sequence

from app.config import settings
from app.core.exceptions import InvalidArgumentError, LevinqError, UsageError
from app.schemas.common import ErrorResponse
from app.schemas.records import CsvRecord
from app.services.integration_service import CLI_METHODS, get_integration_service
from app.services.table_service import TableService
from app.utils.csv_format import write_records

logger = logging.getLogger("levinq")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class CliArgumentParser(argparse.ArgumentParser):
    """解析失败时抛出 UsageError，由 main 统一输出诊断行"""

    def error(self, message: str):
        raise UsageError(message)


def _float_list(text: str) -> List[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"无法解析频率列表: {text}")
    if not values:
        raise UsageError("频率列表不能为空")
    return values


def _int_list(text: str) -> List[int]:
    try:
        values = [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"无法解析节点数列表: {text}")
    if not values:
        raise UsageError("节点数列表不能为空")
    return values


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    common = CliArgumentParser(add_help=False)
    common.add_argument("--method", choices=CLI_METHODS, default=None,
                        help="求积方法（默认取问题的默认方法）")
    common.add_argument("--grid", choices=["lobatto", "radau"], default="lobatto",
                        help="网格类型（radau 仅用于 classic）")
    common.add_argument("--tol", type=float, default=None, help="oracle 容差（≥ 1e-13）")
    common.add_argument("--out", default=None, help="CSV 输出路径（默认标准输出）")
    common.add_argument("--workers", type=int, default=None, help="扫描并发线程数")
    common.add_argument("--verbose", action="store_true", help="输出 INFO 级日志")

    parser = CliArgumentParser(
        prog=settings.app_name,
        description="对数奇异高振荡积分的 Levin 配置法求积",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  levinq integrate --problem log_unit --w 10 --n 16 --method log_linear
  levinq table --id ta1
  levinq sweep --problem exp_log_linear --w-list 100,1000,10000 --n-list 8,12
        """
    )
    sub = parser.add_subparsers(dest="command", parser_class=CliArgumentParser)
    sub.required = True

    p_int = sub.add_parser("integrate", parents=[common], help="单次求积")
    p_int.add_argument("--problem", required=True, help="注册表问题名")
    p_int.add_argument("--w", type=float, required=True, help="频率")
    p_int.add_argument("--n", type=int, default=16, help="节点数")

    p_tab = sub.add_parser("table", parents=[common], help="复现数值表")
    p_tab.add_argument("--id", dest="table_id", required=True,
                       help=f"表标识（{', '.join(TableService.table_ids())}）")

    p_sw = sub.add_parser("sweep", parents=[common], help="(w, n) 网格扫描")
    p_sw.add_argument("--problem", required=True, help="注册表问题名")
    p_sw.add_argument("--w-list", dest="w_list", type=_float_list, required=True,
                      help="逗号分隔的频率列表")
    p_sw.add_argument("--n-list", dest="n_list", type=_int_list, required=True,
                      help="逗号分隔的节点数列表")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.INFO if verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _emit(records: List[CsvRecord], out: Optional[str]) -> None:
    target = open(out, "w", encoding="utf-8", newline="") if out else nullcontext(sys.stdout)
    with target as stream:
        write_records(records, stream)


def _run(args: argparse.Namespace) -> int:
    if args.workers is not None and args.workers < 1:
        raise InvalidArgumentError(f"--workers 必须 ≥ 1，收到 {args.workers}")

    if args.command == "integrate":
        record = get_integration_service().integrate(
            args.problem, args.w, args.n, args.method, grid_kind=args.grid, tol=args.tol
        )
        records = [record]
    elif args.command == "table":
        records = TableService().run(args.table_id, workers=args.workers)
    else:
        records = get_integration_service().sweep(
            args.problem, args.w_list, args.n_list, args.method,
            grid_kind=args.grid, tol=args.tol, workers=args.workers,
        )

    _emit(records, args.out)
    if records and all(r.failed for r in records):
        logger.error(f"{args.command}: 全部 {len(records)} 行均失败")
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    命令行入口

    Args:
        argv: 参数列表（默认 sys.argv[1:]）

    Returns:
        进程退出码
    """
    verbose = "--verbose" in (sys.argv[1:] if argv is None else list(argv))
    _configure_logging(verbose)

    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except LevinqError as e:
        exit_code = EXIT_USAGE if isinstance(e, InvalidArgumentError) else EXIT_NUMERIC
        logger.error(f"命令执行失败: {e.message}", exc_info=logger.isEnabledFor(logging.INFO))
        print(ErrorResponse(code=e.code, message=e.message, exit_code=exit_code).line(), file=sys.stderr)
        return exit_code
    except OSError as e:
        logger.error(f"输出失败: {e}", exc_info=True)
        print(ErrorResponse(code="INVALID_ARGUMENT", message=str(e), exit_code=EXIT_USAGE).line(),
              file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
