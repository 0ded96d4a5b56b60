# Copyright 2026 The Eco-Bee Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Planetary-boundary footprint scoring, recommendations and leaderboard."""

import json
from os import PathLike
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ._core import (
    EcoBeeError,
    FactorTable,
    Leaderboard as _Leaderboard,
    Service as _Service,
    boundary_codes,
    train_model,
    validate_factors,
)
from . import _core

__all__ = [
    "EcoBeeError",
    "FactorTable",
    "Leaderboard",
    "Service",
    "boundary_codes",
    "recommend",
    "score",
    "train_model",
    "validate_factors",
]

_Path = Union[str, PathLike]


def score(table: FactorTable, quiz: Mapping[str, str]) -> Dict[str, Any]:
    """Scores one quiz: {boundaries, composite, explanations}."""
    return json.loads(table._score_json(dict(quiz)))


def recommend(
    catalog: _Path,
    scores: Mapping[str, float],
    model_file: Optional[_Path] = None,
    context: Sequence[str] = (),
    current_options: Sequence[str] = (),
    n: int = 5,
    k: int = 3,
) -> List[Dict[str, Any]]:
    """Ranks catalog actions for a score vector; fallback ranking without a model."""
    return json.loads(
        _core._recommend_json(
            catalog, dict(scores), model_file, list(context), list(current_options), n, k
        )
    )


class Leaderboard(_Leaderboard):
    """Latest-submission-wins leaderboard, in memory or backed by SQLite."""

    def summary(self, campus: Optional[str] = None, k_min: int = 5) -> Dict[str, Any]:
        return json.loads(self._summary_json(campus, k_min))


class Service(_Service):
    """The HTTP API without a transport; handle() returns (status, json)."""

    def request(
        self,
        method: str,
        path: str,
        body: Optional[Any] = None,
        query: Optional[Mapping[str, str]] = None,
    ) -> Tuple[int, Any]:
        text = "" if body is None else json.dumps(body)
        status, payload = self.handle(method, path, text, dict(query or {}))
        return status, json.loads(payload)
