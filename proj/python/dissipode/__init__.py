# Copyright 2026 The dissipode Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the dissipode C++ core."""

import json as _json

from ._core import (
    DissipodeError,
    Problem,
    cli,
    constant_problem,
    kappa,
    load_problem,
    optimal_padding,
    problem_from_json,
    reference_history,
    select_step,
    solve,
    state_errors,
    verify,
)


def run(*args):
    """Runs a CLI subcommand and returns its parsed JSON document."""
    code, out, err = cli([str(a) for a in args])
    if code != 0:
        raise DissipodeError(err.strip() or f"exit code {code}")
    return _json.loads(out)


__all__ = [
    "DissipodeError",
    "Problem",
    "cli",
    "constant_problem",
    "kappa",
    "load_problem",
    "optimal_padding",
    "problem_from_json",
    "reference_history",
    "run",
    "select_step",
    "solve",
    "state_errors",
    "verify",
]
