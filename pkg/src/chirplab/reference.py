"""Constants recorded from reference runs and asserted afterwards.

Each value notes the run that produced it.  Re-record only after a
deliberate change to the numerics.
"""

# run_oracle_crosscheck, k=2, n=4, seed=1, delta=0.05, N=10, x=0, resolution=1280:
# (1/pi^2)|sin part| = 0.306944, |oracle| = 0.320361
REFERENCE_CROSSCHECK_GAP = -0.013417
