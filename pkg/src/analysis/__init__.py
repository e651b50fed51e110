from src.analysis.conservativity import (
    BlockStructure, ConservativityCertificate, block_structure, conservativity_check)
from src.analysis.connectedness import (
    ClosedSubspace, closely_connected_subspace, completely_nonunitary_check, reduce_closely_connected)
from src.analysis.dissipativity import TorusScanReport, dissipativity_scan
