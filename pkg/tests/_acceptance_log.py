"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
LINES = []


def record(criterion, passed, detail):
    LINES.append(f"{criterion} {'PASS' if passed else 'FAIL'}  {detail}")
