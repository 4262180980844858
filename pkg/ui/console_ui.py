import os
import sys

STATUS_MARKS = {"pass": "✅", "fail": "❌", "skipped": "⏭️"}


def get_terminal_width():
    """Get terminal width, default to 80 if can't detect"""
    try:
        return os.get_terminal_size(sys.stderr.fileno()).columns
    except (OSError, ValueError):
        return 80


def _err(line=""):
    print(line, file=sys.stderr)


def should_show(table_flag):
    """Tables go to stderr on a terminal or when --table is given"""
    return table_flag or sys.stderr.isatty()


def print_banner(message):
    """Print a centered banner on stderr"""
    width = min(get_terminal_width(), 100)
    _err()
    _err("=" * width)
    _err(message.center(width))
    _err("=" * width)


def print_check_table(document):
    """One row per check: status mark, suite, name, wall time"""
    instance = document["instance"]
    timing = document.get("timing", {}).get("checks", {})
    print_banner(f"🔬 H({instance['D']},{instance['n']})  order {instance['order']}  m = {instance['m']}")
    for check in document["checks"]:
        mark = STATUS_MARKS.get(check["verdict"], "?")
        elapsed = timing.get(check["name"])
        time_text = f"{elapsed:>10.1f} ms" if elapsed is not None else ""
        _err(f"  {mark} {check['suite']:<12} {check['name']:<28}{time_text}")
        if check["verdict"] == "fail" and "witness" in check:
            _err(f"       ↳ {check['witness'].get('identity', '')}")
        elif check["verdict"] == "skipped":
            _err(f"       ↳ {check['details']['reason']}")
    print_verdict(document["verdict"])


def print_sweep_table(document):
    print_banner(f"🧮 Sweep D ≤ {document['grid']['d_max']}, n ≤ {document['grid']['n_max']}")
    for row in document["instances"]:
        mark = STATUS_MARKS[row["verdict"]]
        failed = f"  failed: {', '.join(row['failed_checks'])}" if row["failed_checks"] else ""
        _err(f"  {mark} H({row['D']},{row['n']})  order {row['order']:>5}{failed}")
    _err(f"\n📊 Results: {document['passed']} passed, {document['total'] - document['passed']} failed")
    print_verdict(document["verdict"])


def print_module_summary(document):
    module = document["module"]
    print_banner(f"🧩 Module of seed '{document['seed']}'")
    _err(f"  r = {module['r']}, d = {module['d']}, dimension = {module['dimension']}, thin = {module['thin']}")
    check = module["basis_check"]
    if check is None:
        _err(f"  ⏭️ basis check not applicable ({module['reason']})")
    else:
        for row in check.get("coefficients", []):
            mark = STATUS_MARKS["pass" if row["verified"] else "fail"]
            _err(f"  {mark} x_{row['i']} = {row['x']}")
        if "failure" in check:
            _err(f"  ❌ {check['failure']}")
    print_verdict(document["verdict"])


def print_audit_table(document):
    print_banner(f"📐 Audit D ≤ {document['grid']['d_max']}, n ≤ {document['grid']['n_max']}")
    _err(f"  {STATUS_MARKS[document['krawtchouk']['verdict']]} krawtchouk")
    for row in document["instances"]:
        marks = " ".join(STATUS_MARKS[c["verdict"]] for c in row["checks"])
        _err(f"  {marks}  D={row['D']} n={row['n']}")
    print_verdict(document["verdict"])


def print_verdict(verdict):
    _err(f"\n{'✅ All checks passed' if verdict == 'pass' else '❌ Verification failed'}")


def print_update_message(message):
    """Print a progress note"""
    _err(f"🔄 {message}")
