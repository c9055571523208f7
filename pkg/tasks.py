"""Tasks for use with Invoke."""
import sys
from distutils.util import strtobool
from invoke import task  # type: ignore

try:
    import toml
except ImportError:
    sys.exit("Please make sure to `pip install toml` or enable the Poetry shell and run `poetry install`.")


def is_truthy(arg):
    """Convert "truthy" strings into Booleans.

    Examples:
        >>> is_truthy('yes')
        True

    Args:
        arg (str): Truthy string (True values are y, yes, t, true, on and 1; false values are n, no,
        f, false, off and 0. Raises ValueError if val is anything else.
    """
    if isinstance(arg, bool):
        return arg
    return bool(strtobool(arg))


PYPROJECT_CONFIG = toml.load("pyproject.toml")
TOOL_CONFIG = PYPROJECT_CONFIG["tool"]["poetry"]
PACKAGE = TOOL_CONFIG["name"].replace("-", "_")


def run_cmd(context, exec_cmd, env=None):
    """Wrapper to run the invoke task commands.

    Args:
        context ([invoke.task]): Invoke task object.
        exec_cmd ([str]): Command to run.
        env (dict): Extra environment variables.

    Returns:
        result (obj): Contains Invoke result from running task.
    """
    print(f"Running command {exec_cmd}")
    return context.run(exec_cmd, pty=True, env=env or {})


@task
def pytest(context):
    """Run the unit tests and doctests.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, "pytest")


@task
def scale(context, triples=10_000_000):
    """Run the slow scale test over a synthetic dump.

    Args:
        context (obj): Used to run specific commands
        triples (int): Number of synthetic triples
    """
    run_cmd(context, "pytest -m slow tests/unit/test_scale.py", env={"CLASS_GRANULARITY_SCALE_TRIPLES": str(triples)})


@task
def black(context):
    """Run black to check that Python files adherence to black standards.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"black --check --diff {PACKAGE} tests tasks.py")


@task
def flake8(context):
    """Run flake8 over the package and tests.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"flake8 --max-line-length 120 {PACKAGE} tests")


@task
def mypy(context):
    """Run mypy over the package.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"mypy --show-error-codes {PACKAGE}")


@task
def pylint(context):
    """Run pylint over the package and tests.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f'find {PACKAGE} tests -name "*.py" | xargs pylint')


@task
def pydocstyle(context):
    """Run pydocstyle to validate docstring formatting.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"pydocstyle {PACKAGE}")


@task
def bandit(context):
    """Run bandit to validate basic static code security analysis.

    Args:
        context (obj): Used to run specific commands
    """
    run_cmd(context, f"bandit --recursive {PACKAGE}")


@task
def tests(context):
    """Run all linters and tests.

    Args:
        context (obj): Used to run specific commands
    """
    black(context)
    flake8(context)
    pylint(context)
    pydocstyle(context)
    bandit(context)
    pytest(context)
    mypy(context)

    print("All tests have passed!")
