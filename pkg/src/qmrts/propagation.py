"""Per-element propagation delays for the quasi-monostatic geometry.

The radar transmit array is phased by the direction of the RTS *receive*
antenna (outbound leg) and the radar receive array by the RTS *transmit*
antenna (return leg); the two angles cross-couple deliberately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .scenario import C0

if TYPE_CHECKING:
    from .scenario import Scenario


@dataclass(frozen=True)
class PathDelays:
    """Delays of one virtual element."""

    tau_tx_s: float    # radar TX element -> RTS receiver
    tau_rx_s: float    # RTS transmitter -> radar RX element
    tau_rts_s: float   # RTS internal delay

    @property
    def tau_c_s(self) -> float:
        """Free-space round trip."""
        return self.tau_tx_s + self.tau_rx_s

    @property
    def tau_s(self) -> float:
        """Total delay between transmitted and received signal."""
        return self.tau_c_s + self.tau_rts_s


def path_delays(s: "Scenario", ntx: int, nrx: int) -> PathDelays:
    """Propagation delays seen by virtual element (ntx, nrx).

    tau_tx = (Rc + dtx*ntx*sin(theta_rx)) / c0
    tau_rx = (Rc + extra + drx*nrx*sin(theta_tx)) / c0
    """
    a, r = s.array, s.rts
    if not 0 <= ntx < a.ntx:
        raise IndexError(f"ntx index {ntx} out of range [0, {a.ntx})")
    if not 0 <= nrx < a.nrx:
        raise IndexError(f"nrx index {nrx} out of range [0, {a.nrx})")
    tau_tx = (r.rc_m + a.dtx_m * ntx * math.sin(r.theta_rx_rad)) / C0
    tau_rx = (r.rc_m + r.extra_return_path_m
              + a.drx_m * nrx * math.sin(r.theta_tx_rad)) / C0
    return PathDelays(tau_tx_s=tau_tx, tau_rx_s=tau_rx, tau_rts_s=r.tau_rts_s)


def far_field_distance(s: "Scenario") -> float:
    """Fraunhofer distance 2*D^2/lambda of the virtual array [m].

    D is the full virtual aperture dtx*(Ntx-1) + drx*(Nrx-1).  Compare
    against rc_m; plane-wave element phases are valid beyond this range.
    """
    a = s.array
    d = a.dtx_m * (a.ntx - 1) + a.drx_m * (a.nrx - 1)
    return 2.0 * d * d / s.wavelength_m
