"""Shared pytest plumbing: surfaces the acceptance verdict lines in the
terminal summary regardless of capture mode."""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
