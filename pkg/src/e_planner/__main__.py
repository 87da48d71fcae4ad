import sys
from typing import Final

from .cli import mkparser
from .common.display import cerr, set_quiet_mode
from .common.error import CapExceededError, EngineMismatchError, EPlannerError, NoPlanError, ValidationError
from .common.log import setup_logging

CAP_TIPS: Final[dict[str, str]] = {
    "max_fluents": "raise the limit with [var]--max-fluents[/] or in [path]eplan.toml[/]",
    "node_budget": "raise [var]node_budget[/] in [path]eplan.toml[/]",
}
DEFAULT_CAP_TIP: Final = "use a smaller problem or a shorter [var]--horizon[/]"


def cap_tip(e: CapExceededError) -> str:
    return CAP_TIPS.get(e.limit, DEFAULT_CAP_TIP)


def main() -> None:
    parser = mkparser()
    args = parser.parse_args()

    if args.quiet:
        set_quiet_mode(True)
    setup_logging(args.verbose or 0)

    try:
        status = args.run_cmd(args)
    except ValidationError as e:
        cerr(str(e), exit_code=2)
    except CapExceededError as e:
        cerr(f"{e}\n\n[tip]tip:[/] {cap_tip(e)}", exit_code=3)
    except EngineMismatchError as e:
        cerr(str(e), exit_code=4)
    except NoPlanError as e:
        cerr(str(e), exit_code=1)
    except EPlannerError as e:
        cerr(str(e), exit_code=2)
    except KeyboardInterrupt:
        sys.exit(130)
    else:
        sys.exit(status)


if __name__ == "__main__":
    main()
