"""Print the closed-form inertia tensor at the three reference shapes next to
the reference lumped-model values, plus the first-principles check."""

from foldquad.harness.reports import format_inertia_report, validate_inertia

if __name__ == "__main__":
    print(format_inertia_report(validate_inertia(grid=100)))
