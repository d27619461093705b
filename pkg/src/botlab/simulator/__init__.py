"""Agent-based replication harness: network growth, bot probing and the recommendation campaign."""

from .generator import evolve_network, generate_network, reverse_arc_rate
from .models import ConfigError, Event, EventLog, GeneratorConfig, ResponseModel
from .probing import bfs_order, round_ticks, run_probe_rounds, shout_histogram, shouters
from .campaign import (
    CATEGORIES,
    CampaignError,
    CampaignSummary,
    RecommendationAssignment,
    assign_recommendations,
    save_assignments,
    simulate_responses,
)
