from .config import EvalConfig, TrainConfig
from .core import augment, train, update
from .evaluation import EvalReport, accuracy, evaluate
from .inference import cascade_predict, flat_predict, predict_batch
from .io import Dataset, load_csv
from .model import DmrModel, Prediction
from .persistence import load_model, save_model
from .rules import export_rules, format_rule

__all__ = [
    'train', 'augment', 'update', 'TrainConfig', 'EvalConfig', 'evaluate', 'EvalReport', 'accuracy',
    'cascade_predict', 'flat_predict', 'predict_batch', 'Dataset', 'load_csv', 'DmrModel',
    'Prediction', 'load_model', 'save_model', 'export_rules', 'format_rule',
]

__version__ = '0.1.0'
