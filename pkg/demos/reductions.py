"""The Sigma2, Sigma3 and Cauchy generators on curated inputs."""

import gmpy2

from bssvm import curated
from bssvm.execute import run_strong, run_weak
from bssvm.transforms import cauchy_transform, sigma2_to_boundedness, sigma3_to_nonconvergence

Q = gmpy2.mpq

if __name__ == "__main__":
    for name, (_, truth, _) in curated.SIGMA2.items():
        p = sigma2_to_boundedness(curated.sigma2(name))
        out = [int(v[0]) for v in run_weak(p, [Q(0)], count=10**6, budget=10**5).vectors]
        print(f"sigma2 {name:<14} formula {truth!s:<5} outputs {out[:8]}{' ...' if len(out) > 8 else ''}")

    for name, (_, truth) in curated.SIGMA3.items():
        vals = [v[0] for v in run_weak(sigma3_to_nonconvergence(curated.sigma3(name)), [Q(0)], count=5000,
                                       budget=10**8).vectors]
        hits = [i for i, v in enumerate(vals) if v]
        print(f"sigma3 {name:<10} formula {truth!s:<5} nonzero outputs at {hits}")

    for name in ("harmonic", "geometric", "sign_flip", "counting"):
        vals = [v[0] for v in run_strong(cauchy_transform(curated.sequence(name)), count=5000).vectors]
        print(f"cauchy {name:<10} sup over the second half: {max(vals[2500:])}")
