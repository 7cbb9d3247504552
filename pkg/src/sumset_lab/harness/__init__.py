"""Command-line harness: descriptor parsing, verification suite, sweeps, reports."""
