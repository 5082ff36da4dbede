"""
CausalLab - Causal geometry and duality verification laboratory
Main application entry point.
"""

import logging
import sys

import config


def setup_logging(level: str = config.LOG_LEVEL):
    """Configure the root logger once for the whole application."""
    logging.basicConfig(level=level.upper(), format=config.LOG_FORMAT, stream=sys.stderr)
    # PIL plugin discovery
    logging.getLogger('PIL').setLevel(logging.WARNING)


def check_dependencies():
    """Check if required dependencies are available."""
    missing_deps = []

    for module, name in (('numpy', 'numpy'), ('scipy', 'scipy'), ('networkx', 'networkx'), ('PIL', 'Pillow')):
        try:
            __import__(module)
        except ImportError:
            missing_deps.append(name)

    if missing_deps:
        error_msg = f"Missing required dependencies:\n{chr(10).join(f'- {dep}' for dep in missing_deps)}\n\n"
        error_msg += "Please install them using:\npip install -r requirements.txt"
        sys.stderr.write(error_msg + "\n")
        return False

    return True


def main():
    """Main application entry point."""
    setup_logging()

    if not check_dependencies():
        sys.exit(config.EXIT_USAGE)

    from views.cli import main as cli_main
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
