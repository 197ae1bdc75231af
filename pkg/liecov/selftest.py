"""
Property suite runner
Runs the pytest suite in a subprocess with the testing configuration and a fixed seed
"""

import logging
import os
import subprocess
import sys
import time
from pathlib import Path

logger = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parent.parent


def setup_test_environment(seed):
    """Environment for the child pytest process"""
    env = dict(os.environ)
    env['LIECOV_ENV'] = 'testing'
    env['LIECOV_SEED'] = str(seed)
    env['LIECOV_THREADS'] = '1'
    return env


def build_command(full=False, coverage=False, test_files=None):
    cmd = [sys.executable, '-m', 'pytest']

    if coverage:
        cmd.extend(['--cov=liecov', '--cov-report=term'])

    if not full:
        cmd.extend(['-m', 'not slow'])

    cmd.extend(test_files or ['tests'])

    cmd.extend([
        '--tb=short',  # Short traceback format
        '--strict-markers',
        '-q',
    ])
    return cmd


def run_selftest(seed=0, full=False, coverage=False, test_files=None):
    """Run the suite; returns 0 on success, 1 otherwise"""
    cmd = build_command(full=full, coverage=coverage, test_files=test_files)
    logger.info(f"running property suite: {' '.join(cmd)}")
    print(f"🚀 Running property suite (seed {seed}{', full' if full else ''})")
    print("=" * 60)

    start_time = time.time()
    try:
        subprocess.run(cmd, check=True, cwd=REPO_ROOT, env=setup_test_environment(seed))
    except subprocess.CalledProcessError as e:
        print("=" * 60)
        print(f"❌ Property suite failed! (took {time.time() - start_time:.2f} seconds)")
        print(f"Exit code: {e.returncode}")
        return 1
    except KeyboardInterrupt:
        print("\n⏹️  Property suite interrupted")
        return 1

    print("=" * 60)
    print(f"✅ Property suite passed! (took {time.time() - start_time:.2f} seconds)")
    return 0
