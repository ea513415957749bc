"""
Qubit efficiency and leakage
============================

Efficiency is message bits over (channel qubits + decoys + announced bits).
Sending the initial state once by QSDC costs a fixed overhead that vanishes
over many copies and stops the announcement from leaking anything.
"""

from aqd.analysis import PRESETS, efficiency_fraction, leakage_bits, qsdc_amortized_efficiency

for name, inp in PRESETS.items():
    f = efficiency_fraction(inp)
    print(f"{name:<12} {inp.c}/{inp.qubits + inp.b} = {100 * float(f):.1f}%")

bell = PRESETS["bell-qd"]
for p in (1, 10, 100, None):
    f = qsdc_amortized_efficiency(bell, p)
    print(f"Bell with QSDC, copies={p or 'inf'}: {f} = {100 * float(f):.1f}%")

print("leakage (2,2):", leakage_bits(2, 2), " (2,4):", leakage_bits(2, 4),
      " secret state:", leakage_bits(2, 4, secret_initial_state=True))
