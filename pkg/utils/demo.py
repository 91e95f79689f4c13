"""
Offline Demo - checks every bundled example history with each engine
Useful for seeing the monitor's verdicts and removal orders side by side
"""
from colorama import init, Fore, Style
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import config
from src.model import parse_history
from src.monitor import Monitor

# Initialize colorama
init(autoreset=True)

ENGINES = ("fast", "naive", "oracle")


def print_header():
    print("\n" + "="*70)
    print(Fore.CYAN + Style.BRIGHT + "🔎 LINEARIZABILITY MONITOR - DEMO")
    print("="*70 + "\n")


def demo_history(path):
    """Check one history file with every engine and print the results."""
    fmt = "events" if "events" in path.stem else "ops"
    history = parse_history(path.read_text(encoding="utf-8"), fmt)
    print(Fore.CYAN + f"📄 {path.name}  ({history.adt.value}, {len(history)} ops)")

    verdicts = set()
    for engine in ENGINES:
        report = Monitor(engine).check(history)
        verdicts.add(report.verdict)
        colour = Fore.GREEN if report.linearizable else Fore.RED
        order = " ".join(str(v) for v in report.removal_order) or "-"
        print(colour + f"   {engine:<7} {report.verdict.value:<17} {report.elapsed_ns / 1e3:9.1f} µs   order: {order}")

    if len(verdicts) > 1:
        print(Fore.RED + "   ❌ engines disagree!")
        return False
    return True


def main():
    print_header()
    paths = sorted(config.HISTORIES_PATH.glob("*.hist"))
    if not paths:
        print(Fore.YELLOW + f"⚠️  No histories found in {config.HISTORIES_PATH}")
        return 1

    agreed = 0
    for path in paths:
        if demo_history(path):
            agreed += 1
        print()

    print("="*70)
    print(Fore.GREEN + f"✅ {agreed}/{len(paths)} histories checked consistently")
    print("="*70 + "\n")
    return 0 if agreed == len(paths) else 1


if __name__ == "__main__":
    sys.exit(main())
