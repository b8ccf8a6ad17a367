"""Correlation bounds across a local noise channel.

The built-in two-Kraus channel acts on subsystem A with E0 = sqrt(gamma) I
and E1 = sqrt(1 - gamma) (a bit flip on span{|0>, |1>}). On the
three-coefficient family it maps (c1, c2, c3) to (c1, (2g-1)c2, (2g-1)c3),
so the discord bound after the channel is again closed-form. This script
traces the bound gap over gamma, both for a generic state and for the
Werner family where the gap T(c, gamma) has its own closed form.
"""

import numpy as np

from sqdiscord import (
    DiagCorrelationSpec,
    channel_gap_general,
    sqd_bound_after_channel,
    sqd_upper_bound_diag,
    werner_gap_T,
)


def main():
    c, x = (0.2, 0.35, 0.1), 4.0
    spec = DiagCorrelationSpec.diag3(2, *c)
    before = sqd_upper_bound_diag(spec, x).sqd_upper_bound
    print(f"state coefficients {c}, strength x = {x}")
    print(f"bound before the channel: {before:.6f}")
    print()
    print("  gamma   bound after   gap (before - after)")
    for gamma in np.linspace(0.0, 1.0, 11):
        after = sqd_bound_after_channel(spec, float(gamma), x).sqd_upper_bound
        print(f"  {gamma:5.2f}   {after:10.6f}   {before - after:+.6f}")
    print()
    print("gamma = 1 is the identity channel (zero gap); gamma = 0 flips the")
    print("sign of c2, c3, which leaves the spectrum and the bound unchanged,")
    print("so the gap vanishes at both endpoints and peaks at gamma = 1/2.")
    print()

    print("Werner family: the gap is closed-form and independent of x")
    cw = 0.5
    wspec = DiagCorrelationSpec.diag3(2, -cw, -cw, -cw)
    print("  gamma   T(c, gamma)   general-route gap (x=0.5, x=30)")
    for gamma in (0.1, 0.25, 0.5, 0.75, 0.9):
        t = werner_gap_T(cw, gamma)
        g1 = channel_gap_general(wspec, gamma, 0.5)
        g2 = channel_gap_general(wspec, gamma, 30.0)
        print(f"  {gamma:5.2f}   {t:10.6f}    {g1:10.6f}  {g2:10.6f}")
    print()
    print("weak and projective measurements see the identical gap: the")
    print("measured-entropy terms cancel between the before and after states.")


if __name__ == "__main__":
    main()
