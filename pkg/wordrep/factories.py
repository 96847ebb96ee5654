from itertools import combinations

import factory
import factory.random

from . import models
from .claims import REGISTRY
from .graphs import Graph, build_graph

factory.random.reseed_random(42)


class GraphFactory(factory.Factory):
    """Random graphs on 1..n. Each edge is present with probability `density`."""

    class Meta:
        model = Graph

    class Params:
        density = 0.5

    n = 6
    edges = factory.LazyAttribute(
        lambda o: [e for e in combinations(range(1, o.n + 1), 2) if factory.random.randgen.random() < o.density]
    )

    @classmethod
    def _build(cls, model_class, n, edges, labels=None):
        return build_graph(n, edges, labels)

    @classmethod
    def _create(cls, model_class, n, edges, labels=None):
        return build_graph(n, edges, labels)


class VerificationRunFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = models.VerificationRun

    command = "wordrep paper --quick"
    deterministic = True


class ClaimResultFactory(factory.django.DjangoModelFactory):
    """A claim that has not run yet. Accepts trait passed."""

    class Meta:
        model = models.ClaimResult

    run = factory.SubFactory(VerificationRunFactory)
    key = factory.Iterator(["round-trips", "small-m", "reductions"])
    title = factory.LazyAttribute(lambda o: REGISTRY[o.key].title)
    status = models.VerificationRun.Status.NEW

    class Params:
        passed = factory.Trait(
            status=models.VerificationRun.Status.PASSED,
            elapsed_ms=factory.Faker("pyint", min_value=1, max_value=1000),
        )
