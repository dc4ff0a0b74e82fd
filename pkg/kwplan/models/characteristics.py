import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np


AsnSup = namedtuple('AsnSup', ['theta_max', 'n_max', 'edge_exceeds'])


@dataclass(frozen=True)
class Characteristics:
    """Exact characteristics of one plan."""

    oc: dict
    asn: dict
    alpha: float
    beta: float
    stop_dist: np.ndarray = field(repr=False)
    q99: int
    theta_star: float

    @property
    def asn_at_star(self):
        return self.asn[self.theta_star]


@dataclass(frozen=True)
class SimulationResult:
    theta: float
    replications: int
    oc_hat: float
    asn_hat: float
    asn_var: float

    @property
    def reject_hat(self):
        return 1.0 - self.oc_hat

    @property
    def oc_se(self):
        return math.sqrt(self.oc_hat * (1.0 - self.oc_hat) /
                         self.replications)

    @property
    def asn_se(self):
        return math.sqrt(self.asn_var / self.replications)


Efficiency = namedtuple('Efficiency', ['r', 'qr', 'r_w', 'qr_w'])
