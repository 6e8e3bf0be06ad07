"""Independent dense-diagonalization oracle for the frozen golden values.

Uses numpy/LAPACK (eigh) and straightforward matrix arithmetic; shares no code
with the Rust implementation. Run with `python3 rabi_oracle.py` and paste the
printed values into `golden.rs` when the physics or conventions change.
"""
import numpy as np


def hamiltonian(omega, omega0, g, n_max):
    d = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, d)), 1)
    sz = np.diag([-1.0, 1.0])  # index 0 = |g>, index 1 = |e>
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return (omega * np.kron(np.eye(2), a.T @ a)
            + omega0 / 2 * np.kron(sz, np.eye(d))
            + g * np.kron(sx, a + a.T))


def ground(omega, omega0, g, n_max):
    e, v = np.linalg.eigh(hamiltonian(omega, omega0, g, n_max))
    psi = v[:, 0] * np.sign(v[0, 0])
    return e, v, psi, float(np.sum(psi[n_max + 1:] ** 2))


def survival(g, times, n_max=40, eps=0.0):
    e, v, psi, _ = ground(1.0, 1.0, g, n_max)
    d = n_max + 1
    rho = np.outer(psi, psi).astype(complex)
    mask = np.zeros(2 * d)
    mask[:d] = 1
    last, single = 0.0, []
    for t in times:
        u = (v * np.exp(-1j * e * (t - last))) @ v.T
        rho = u @ rho @ u.conj().T
        last = t
        sig = (1 - eps) * (mask[:, None] * rho * mask[None, :]) + eps * rho
        p = np.trace(sig).real
        single.append(p)
        rho = sig / p
    return np.array(single)


def two_period(t1, ratio, n):
    out, acc = [], 0.0
    for k in range(n):
        acc += t1 if k % 2 == 0 else ratio * t1
        out.append(acc)
    return out


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    for n_max in (40, 60):
        e, v, psi, pe = ground(1.0, 1.0, 1.0, n_max)
        print(f"g=1 n_max={n_max}: energy={e[0]!r} p_e={pe!r} c0={psi[0]!r} c1={psi[n_max + 2]!r}")

    # cutoff convergence at g/omega = 1, tol 1e-8, stepping by 10
    for n in range(10, 200, 10):
        e1, _, _, p1 = ground(1.0, 1.0, 1.0, n)
        e2, _, _, p2 = ground(1.0, 1.0, 1.0, n + 10)
        if abs(e1[0] - e2[0]) < 1e-8 and abs(p1 - p2) < 1e-8:
            print("converged n_max", n)
            break

    # overlaps of normalized P_g|G> with the lowest eigenstates, g/omega = 1
    e, v, psi, _ = ground(1.0, 1.0, 1.0, 40)
    proj = psi.copy()
    proj[41:] = 0
    proj /= np.linalg.norm(proj)
    print("overlaps", repr((np.abs(v[:, :4].T @ proj) ** 2)))

    times = two_period(2 * np.pi, np.sqrt(2), 8)
    s = survival(1.0, times)
    print("survival single", repr(s))
    print("survival cumulative", repr(np.cumprod(s)))
    print("survival single eps=0.2", repr(survival(1.0, times, eps=0.2)))
