from .Errors import *
from .Dataset import Dataset, Manifest, PropertySpec, PropertyGroup, PropertyKind, StandardizedVector
from .TestOutcome import TestId, TestOutcome
from .Configs import ChsicConfig, RcotConfig, CmiknnConfig, AuditConfig, NullMethod, Mode, Consensus, Correction
from .Kernels import GramMatrix, FourierFeatureMap
from .SignificanceTable import ConsensusCell, SignificanceTable, UsageSummary
from .Landmarks import Point, LandmarkSet, SymmetryRecord
from .Trend import AccuracyTable, TrendCurve, GroupSummary
from .Scm import ScmKind, ScmSpec, GroundTruth, ScmSample, PipelineFixture, RejectionRate, CalibrationReport
from .RunManifest import RunManifest, VERSION
