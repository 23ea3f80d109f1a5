"""Cross-project defect prediction benchmark toolkit.

Implements an end-to-end pipeline: PROMISE-style dataset ingestion, nearest
neighbour relevancy filtering of a merged source pool, eight data resampling
treatments plus a no-resampling baseline, built-in classifiers (NB/KNN/RF),
imbalance-aware evaluation measures (pd, pf, g-measure, AUC), and a
nonparametric comparison protocol (Brunner-Munzel tests, Cliff's delta,
Hochberg adjustment, win-tie-loss tables, practical-success rates).
"""

__version__ = "0.1.0"
