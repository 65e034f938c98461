"""Tests for the forward ring topology and its sub-neighbourhoods."""

import pytest

from src.common.exceptions import DomainError
from src.services.swarm.topology import build_forward_topology, forward_links_at


class TestForwardTopology:
    """Test neighbourhood and subgroup construction."""

    def test_six_particles_three_subgroups(self):
        """Test N = 6 with two links: informers wrap around, subgroups are blocks of two."""
        topology = build_forward_topology(6, n_subgroups=3, links_per_particle=2)

        assert topology.neighbourhoods[0] == (0, 1, 2)
        assert topology.neighbourhoods[4] == (0, 4, 5)
        assert topology.neighbourhoods[5] == (0, 1, 5)
        assert topology.subgroup_of == (0, 0, 1, 1, 2, 2)
        assert topology.members(1) == [2, 3]

    def test_single_particle(self):
        """Test a one-particle swarm informs only itself."""
        topology = build_forward_topology(1, n_subgroups=1)

        assert topology.neighbourhoods == ((0,),)
        assert topology.subgroup_of == (0,)
        assert topology.is_connected()

    def test_fifty_particles(self):
        """Test the default swarm splits into blocks of 17, 17 and 16 particles."""
        topology = build_forward_topology(50)

        assert [len(topology.members(g)) for g in range(3)] == [17, 17, 16]
        assert topology.n_particles == 50

    def test_self_in_every_neighbourhood(self):
        """Test every particle is one of its own informers."""
        topology = build_forward_topology(10, n_subgroups=2, links_per_particle=3)

        for i, nb in enumerate(topology.neighbourhoods):
            assert i in nb
            assert list(nb) == sorted(nb)

    def test_always_connected(self):
        """Test the informer graph is strongly connected for any size and link count."""
        for n in range(1, 31):
            for links in range(1, 5):
                topology = build_forward_topology(n, n_subgroups=1, links_per_particle=links)

                assert topology.is_connected(), (n, links)

    def test_every_subgroup_populated(self):
        """Test no subgroup is left empty for N divisible by the subgroup count."""
        topology = build_forward_topology(12, n_subgroups=4)

        assert sorted(set(topology.subgroup_of)) == [0, 1, 2, 3]

    def test_zero_particles_rejected(self):
        """Test an empty swarm is rejected."""
        with pytest.raises(DomainError):
            build_forward_topology(0, n_subgroups=1)

    def test_more_subgroups_than_particles_rejected(self):
        """Test more subgroups than particles is rejected."""
        with pytest.raises(DomainError):
            build_forward_topology(2, n_subgroups=3)


class TestForwardLinksAt:
    """Test the widening of the forward neighbourhood over a run."""

    def test_linear_growth(self):
        """Test the link count starts at the initial value and reaches N - 1 at the full step."""
        assert forward_links_at(1, t_full=11, n_particles=50) == 2
        assert forward_links_at(6, t_full=11, n_particles=50) == 25
        assert forward_links_at(11, t_full=11, n_particles=50) == 49
        assert forward_links_at(500, t_full=11, n_particles=50) == 49

    def test_non_decreasing(self):
        """Test the link count never shrinks between steps."""
        counts = [forward_links_at(t, t_full=300, n_particles=50, initial_links=2) for t in range(1, 401)]

        assert all(a <= b for a, b in zip(counts, counts[1:]))
        assert counts[0] == 2 and counts[-1] == 49

    def test_full_step_one(self):
        """Test a full step of one gives the whole swarm from the first step."""
        assert forward_links_at(1, t_full=1, n_particles=10) == 9

    def test_small_swarm_keeps_initial_links(self):
        """Test a swarm smaller than the initial ring never loses links."""
        assert forward_links_at(5, t_full=10, n_particles=2, initial_links=2) == 2

    def test_full_neighbourhood_is_gbest(self):
        """Test the grown topology informs every particle by the whole swarm."""
        links = forward_links_at(100, t_full=50, n_particles=9)
        topology = build_forward_topology(9, n_subgroups=3, links_per_particle=links)

        assert all(n == tuple(range(9)) for n in topology.neighbourhoods)

    @pytest.mark.parametrize("t,t_full,links", [(0, 10, 2), (1, 0, 2), (1, 10, 0)])
    def test_invalid_arguments(self, t, t_full, links):
        """Test steps below one and non-positive initial links are rejected."""
        with pytest.raises(DomainError):
            forward_links_at(t, t_full=t_full, n_particles=10, initial_links=links)
