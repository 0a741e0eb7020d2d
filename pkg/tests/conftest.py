import pytest

from corpus import fixed_corpus


@pytest.fixture(params=sorted(fixed_corpus()))
def corpus_graph(request):
    return request.param, fixed_corpus()[request.param]
