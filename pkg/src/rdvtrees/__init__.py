"""Rendezvous of two identical memory-bounded agents on anonymous
port-labeled trees: simulator, protocol, and adversarial instance forge."""

from .trees import (PortLabeledTree, TreeError, WalkPosition, parse_tree,
                    format_tree, basic_walk_step, counter_basic_walk_step,
                    basic_walk, center, contract)
from .symmetry import (is_symmetric, perfectly_symmetrizable,
                       perfectly_symmetrizable_bruteforce, symmetrize_witness,
                       certify_by_symmetry, BudgetExceeded)
from .agents import (AgentAutomaton, AgentProgram, AutomatonProgram,
                     MemoryMeter, basic_walk_automaton, random_automaton,
                     load_automaton, parse_automaton, format_automaton,
                     reduce_for_colored_line)
from .engine import (Scenario, RunResult, Met, CertifiedNeverMeet, Timeout,
                     run, verify_certificate, check_parity_lemma,
                     parse_scenario, format_scenario, export_trace)
from .protocol import (RendezvousProgram, explo_oracle, prime_line,
                       protocol_horizon, rendezvous_path_edges)
from .forge import (ForgeInstance, ForgeError, analyze_digraph,
                    forge_theorem1, forge_theorem3, forge_theorem4,
                    behavior_function, save_instance)
from .generate import (gen_random_tree, all_topologies, all_port_labelings,
                       mirrored_instance)
from .corpus import CorpusSpec, RunReport, corpus_run
