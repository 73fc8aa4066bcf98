#!/usr/bin/env python3
"""
Test Runner for the partial-adaptive simulator

Runs all tests, only the fast unit tests, only the acceptance sweeps, or a
single test file.
"""
import argparse
import os
import sys
import unittest

ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(ROOT, "src"))
sys.path.insert(0, ROOT)

UNIT_PATTERN = "test_[!a]*.py"
ACCEPTANCE_PATTERN = "test_acceptance.py"


def discover_and_run_tests(pattern=None, verbose=False):
    """
    Discover and run tests matching the specified pattern

    Args:
        pattern: Filename pattern for test discovery
        verbose: Whether to show verbose output

    Returns:
        True if all tests passed, False otherwise
    """
    verbosity = 2 if verbose else 1
    loader = unittest.TestLoader()
    suite = loader.discover("tests", pattern=pattern or "test*.py", top_level_dir=ROOT)
    result = unittest.TextTestRunner(verbosity=verbosity).run(suite)
    return result.wasSuccessful()


def run_specific_test_file(file_path, verbose=False):
    """
    Run a specific test file

    Args:
        file_path: Path to the test file
        verbose: Whether to show verbose output

    Returns:
        True if all tests passed, False otherwise
    """
    if not os.path.exists(file_path):
        print(f"Error: Test file '{file_path}' does not exist")
        return False
    module = os.path.relpath(os.path.abspath(file_path), ROOT)[: -len(".py")].replace(os.sep, ".")
    suite = unittest.TestLoader().loadTestsFromName(module)
    result = unittest.TextTestRunner(verbosity=2 if verbose else 1).run(suite)
    return result.wasSuccessful()


def main():
    """Parse command line arguments and run tests"""
    parser = argparse.ArgumentParser(description="Run simulator tests")

    group = parser.add_mutually_exclusive_group()
    group.add_argument("--unit", action="store_true", help="Run only unit tests")
    group.add_argument("--acceptance", action="store_true", help="Run only the acceptance sweeps")
    group.add_argument("--file", help="Run a specific test file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Show verbose output")
    args = parser.parse_args()

    print("=" * 70)
    print("pasm Test Runner")
    print("=" * 70)

    if args.unit:
        print("Running unit tests...\n")
        success = discover_and_run_tests(UNIT_PATTERN, args.verbose)
    elif args.acceptance:
        print("Running acceptance sweeps...\n")
        success = discover_and_run_tests(ACCEPTANCE_PATTERN, args.verbose)
    elif args.file:
        print(f"Running tests from file: {args.file}\n")
        success = run_specific_test_file(args.file, args.verbose)
    else:
        print("Running all tests...\n")
        success = discover_and_run_tests(None, args.verbose)

    print("\n" + "=" * 70)
    print("All tests passed!" if success else "Some tests failed!")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
