"""
Setup script for CausalLab.
Installs dependencies and sets up the environment.
"""

import os
import platform
import subprocess
import sys
from pathlib import Path


def check_python_version():
    """Check if Python version is compatible."""
    if sys.version_info < (3, 9):
        print("✗ Python 3.9 or higher is required")
        print(f"Current version: {sys.version}")
        return False

    print(f"✓ Python {sys.version.split()[0]} detected")
    return True


def install_dependencies():
    """Install required dependencies."""
    print("Installing dependencies...")

    try:
        subprocess.check_call([
            sys.executable, '-m', 'pip', 'install', '-r', 'requirements.txt'
        ])
        print("✓ Dependencies installed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"✗ Failed to install dependencies: {e}")
        return False


def run_smoke_scenario():
    """Run the smallest bundled scenario as an installation check."""
    print("Running smoke scenario...")
    scenario = Path('scenarios') / 'diamond_poset.json'
    if not scenario.exists():
        print(f"✗ Scenario not found: {scenario}")
        return False
    result = subprocess.run([sys.executable, 'main.py', 'run', str(scenario)], capture_output=True, text=True)
    if result.returncode != 0:
        print(result.stdout)
        print(result.stderr)
        print("✗ Smoke scenario failed")
        return False
    print("✓ Smoke scenario passed")
    return True


def create_directories():
    """Create necessary directories."""
    for directory in ['reports']:
        Path(directory).mkdir(exist_ok=True)
        print(f"✓ Created directory: {directory}")


def create_launcher_script():
    """Create a launcher script for easy execution."""
    if platform.system() == "Windows":
        launcher_content = """@echo off
python main.py %*
"""
        with open('causal_lab.bat', 'w') as f:
            f.write(launcher_content)
        print("✓ Created launcher script: causal_lab.bat")
    else:
        launcher_content = """#!/bin/bash
python3 "$(dirname "$0")/main.py" "$@"
"""
        with open('causal_lab.sh', 'w') as f:
            f.write(launcher_content)
        os.chmod('causal_lab.sh', 0o755)
        print("✓ Created launcher script: causal_lab.sh")


def main():
    """Main setup process."""
    print("CausalLab Setup")
    print("=" * 20)

    if not check_python_version():
        return False

    if not install_dependencies():
        return False

    create_directories()
    create_launcher_script()
    success = run_smoke_scenario()

    print("\n" + "=" * 20)
    if success:
        print("Setup completed successfully!")
        print("\nTo run a scenario:")
        print("  python main.py run scenarios/prop33_sprinkle.json --out reports/prop33.json")
    else:
        print("Setup completed with warnings!")

    return success


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
