"""
One round of asymmetric dialogue
================================

Bob encodes 4 bits per copy of the cluster state, Alice 2 bits on one travel
qubit.  The run is seeded, so the transcript is reproducible.  A second run
with an intercept-resend eavesdropper shows the decoy check aborting.
"""

from aqd.protocol import ProtocolConfig, run

cfg = ProtocolConfig("cluster4", "G2", "G1", copies=3, seed=7)
tr = run(cfg, bob_msg="101100111000", alice_msg="011011")
print("announced outcomes:", tr.announcements)
print("Alice decoded Bob  :", tr.decoded_bob_message)
print("Bob decoded Alice  :", tr.decoded_alice_message)
print("decoy error rates  :", tr.leg_rates)

spied = ProtocolConfig("cluster4", "G2", "G1", copies=3, decoy_per_leg=200,
                       error_threshold=0.05, eve="intercept_resend", seed=7)
tr = run(spied, "101100111000", "011011")
print(f"\nwith Eve: aborted={tr.aborted} at {tr.abort_stage}, rates {tr.leg_rates}")
