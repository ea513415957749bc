"""Asymmetric quantum dialogue: operator groups, densecodable states, noisy channels and a protocol simulator."""

from .pauligroup import OperatorGroup, PauliWord, get_group, subgroups_of_order
from .statelib import EncodingScheme, get_state, verify_table1, verify_table2
from .channels import ad_channel, pd_channel, make_channel
from .protocol import ProtocolConfig, run
from .analysis import average_fidelity, closed_form_fidelity, sweep

__version__ = "0.1.0"
