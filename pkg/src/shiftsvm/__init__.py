"""Binary classification under class imbalance via regression on shifted targets.

The minority class (-1) and majority class (+1) of a binary task are given
unique random regression targets; shifting the minority targets makes the
target range symmetric (or minority-heavy), and a linear epsilon-SVR trained
on them is decoded by its sign.  A linear SVC with SMOTE oversampling serves
as the baseline.
"""

from .dataio import Dataset, DatasetSpec, dataset_summary, load_dataset, load_registered, read_registry
from .labelshift import TargetAssignment, assign_random_targets, plain_binary_targets, shift_targets
from .smote import SmoteParams, knn_minority, smote_balance
from .svm import LinearModel, SvmParams, default_epsilon, predict_class, predict_raw, train_svc, train_svr

__version__ = "0.1.0"
