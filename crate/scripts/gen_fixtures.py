#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixture corpus under fixtures/.

Requires pyscf. Each geometry produces `<tag>.fcidump` (MO integrals in
chemists' notation, canonical RHF orbitals sorted by energy) and a
`<tag>.toml` sidecar with provenance and reference energies.

    python3 scripts/gen_fixtures.py [out_dir]
"""
import os
import sys

import numpy as np
import pyscf
from pyscf import fci, gto, scf
from pyscf.tools import fcidump

BASIS = "sto-3g"


def h2(d):
    return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


def h4_chain(d):
    return [("H", (0.0, 0.0, i * d)) for i in range(4)]


def h2o(d, angle_deg=104.5):
    half = np.deg2rad(angle_deg) / 2.0
    return [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (d * np.sin(half), 0.0, d * np.cos(half))),
        ("H", (-d * np.sin(half), 0.0, d * np.cos(half))),
    ]


SETS = {
    "h2": (h2, [0.5, 0.7414, 1.0, 1.5, 2.0]),
    "h4": (h4_chain, [round(0.1 + 0.05 * i, 3) for i in range(21)]),
    "h2o": (h2o, [0.8, 1.02, 1.2]),
}


def tight_rhf(mol):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-13
    mf.conv_tol_grad = 1e-10
    mf.max_cycle = 500
    mf.verbose = 0
    mf.kernel()
    if not mf.converged and mf.e_tot is None:
        raise RuntimeError(f"RHF failed for {mol.atom}")
    return mf


def mo_fock(h1, eri, nocc):
    j = np.einsum("pqii->pq", eri[:, :, :nocc, :nocc])
    k = np.einsum("piiq->pq", eri[:, :nocc, :nocc, :])
    return h1 + 2.0 * j - k


def polish(h1, eri, nocc, max_iter=100):
    """Roothaan steps on the MO integrals themselves.

    The orthonormal MO basis is well conditioned even where the AO overlap is
    nearly singular, so the occupied-virtual Fock block reaches ~1e-15.
    """
    h1 = 0.5 * (h1 + h1.T)
    eri = pyscf.ao2mo.restore(1, pyscf.ao2mo.restore(8, eri, h1.shape[0]), h1.shape[0])
    for _ in range(max_iter):
        f = mo_fock(h1, eri, nocc)
        ov = np.max(np.abs(f[:nocc, nocc:])) if nocc < f.shape[0] else 0.0
        if ov < 1e-14:
            break
        _, u = np.linalg.eigh(f)
        # keep orbital phases stable
        u = u * np.sign(np.diag(u))[None, :]
        h1 = u.T @ h1 @ u
        eri = np.einsum("pqrs,pa,qb,rc,sd->abcd", eri, u, u, u, u, optimize=True)
    f = mo_fock(h1, eri, nocc)
    ov = float(np.max(np.abs(f[:nocc, nocc:]))) if nocc < f.shape[0] else 0.0
    return h1, eri, ov


def fmt_atoms(atoms):
    rows = []
    for sym, (x, y, z) in atoms:
        rows.append(f'  ["{sym}", {x:.10f}, {y:.10f}, {z:.10f}],')
    return "\n".join(rows)


def main(out_dir):
    for name, (geom, lengths) in SETS.items():
        sub = os.path.join(out_dir, name)
        os.makedirs(sub, exist_ok=True)
        for d in lengths:
            atoms = geom(d)
            mol = gto.M(atom=atoms, basis=BASIS, unit="Angstrom", verbose=0)
            mf = tight_rhf(mol)
            tag = f"{name}_{d:.4f}"
            path = os.path.join(sub, tag + ".fcidump")
            nocc = mol.nelectron // 2
            h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
            norb = h1.shape[0]
            eri = pyscf.ao2mo.restore(1, pyscf.ao2mo.full(mol, mf.mo_coeff), norb)
            h1, eri, ov = polish(h1, eri, nocc)
            ecore = mol.energy_nuc()
            fcidump.from_integrals(path, h1, eri, norb, mol.nelectron, nuc=ecore, ms=0, tol=1e-15)
            e_hf = ecore + float(np.trace(h1[:nocc, :nocc]) + np.trace(mo_fock(h1, eri, nocc)[:nocc, :nocc]))
            solver = fci.direct_spin1.FCI(mol)
            solver.conv_tol = 1e-13
            e_fci, civec = solver.kernel(h1, eri, norb, mol.nelec, ecore=ecore)
            s2, _ = fci.spin_op.spin_square0(civec, norb, mol.nelec)
            with open(os.path.join(sub, tag + ".toml"), "w") as f:
                f.write(f'name = "{name}"\n')
                f.write(f"bond_length = {d}\n")
                f.write(f'basis = "{BASIS}"\n')
                f.write(f'generator = "pyscf {pyscf.__version__}"\n')
                f.write(f'fcidump = "{tag}.fcidump"\n')
                f.write(f"n_spatial = {norb}\n")
                f.write(f"n_electrons = {mol.nelectron}\n")
                f.write("geometry = [\n" + fmt_atoms(atoms) + "\n]\n")
                f.write("\n[energies]\n")
                f.write(f"nuclear_repulsion = {float(mol.energy_nuc())!r}\n")
                f.write(f"hf = {float(e_hf)!r}\n")
                f.write(f"fci = {float(e_fci)!r}\n")
                f.write(f"fci_spin_square = {float(s2)!r}\n")
                f.write(f"max_fock_occ_virt = {float(ov)!r}\n")
            print(f"{tag}: E_HF={e_hf:.10f} pyscf={mf.e_tot:.10f} E_FCI={e_fci:.10f} <S2>={s2:.2e} |F_ov|={ov:.1e}")


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "fixtures"))
