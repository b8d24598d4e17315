"""Generative model testbeds and their shared dataset/latent types."""

from __future__ import annotations

import numpy as np
import pandas as pd

from clfmh.models.base import ArrayLatent, Dataset, Model, SeedLatent
from clfmh.models.cir import CIRModel
from clfmh.models.gauss_choice import GaussChoiceModel
from clfmh.models.lotka_volterra import LotkaVolterraModel
from clfmh.models.normal_ls import NormalLSModel
from clfmh.models.ricker import RickerModel

MODEL_CLASSES = {
    "normal_ls": NormalLSModel,
    "gauss_choice": GaussChoiceModel,
    "cir": CIRModel,
    "ricker": RickerModel,
    "lotka_volterra": LotkaVolterraModel,
}


def dataset_to_csv(data: Dataset, path) -> None:
    pd.DataFrame(data.rows, columns=data.column_names()).to_csv(path, index=False)


def dataset_from_csv(path, layout: str) -> Dataset:
    return Dataset(pd.read_csv(path).to_numpy(dtype=float), layout)


__all__ = [
    "ArrayLatent",
    "CIRModel",
    "Dataset",
    "GaussChoiceModel",
    "LotkaVolterraModel",
    "MODEL_CLASSES",
    "Model",
    "NormalLSModel",
    "RickerModel",
    "SeedLatent",
    "dataset_from_csv",
    "dataset_to_csv",
]
