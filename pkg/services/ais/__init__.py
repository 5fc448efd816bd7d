"""
AIS pipeline components: cleaning, geometry, event detectors, calibration
and the synthetic corpus.
"""
