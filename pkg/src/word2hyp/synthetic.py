"""Synthetic corpora with a planted hypernym hierarchy.

A complete tree of concept words is generated.  Every node owns a small
vocabulary of topic words.  Each corpus line is about one leaf: it contains
the leaf word, topic words drawn from the leaf and all of its ancestors (more
of them the more general the ancestor), and occasionally the ancestor words
themselves.  An ancestor word therefore occurs with the union of its
descendants' contexts, which is the distributional inclusion structure that
hyponymy detection relies on.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from .evaluation import LabeledPair


@dataclass
class Node:
    word: str
    depth: int
    parent: "Node" = None
    children: list = field(default_factory=list)
    topic_words: list = field(default_factory=list)
    topic_weights: np.ndarray = None

    def ancestors(self):
        node = self.parent
        while node is not None:
            yield node
            node = node.parent


@dataclass
class Taxonomy:
    levels: int
    branching: int
    root: Node
    nodes: list

    def __post_init__(self):
        self.by_word = {n.word: n for n in self.nodes}

    @property
    def leaves(self):
        return [n for n in self.nodes if not n.children]

    @property
    def words(self):
        return [n.word for n in self.nodes]

    def level(self, depth):
        return [n for n in self.nodes if n.depth == depth]

    def is_ancestor(self, anc, desc):
        return any(a.word == anc for a in self.by_word[desc].ancestors())


def generate_taxonomy(levels=3, branching=5, seed=0, topic_words=10):
    """Complete ``branching``-ary tree with ``levels`` levels (root included).

    Node words follow the path naming scheme ``n0``, ``n0_2``, ``n0_2_4``;
    the topic words of node ``n0_2`` are ``t0_2w0 .. t0_2w9``.  The seed only
    drives the per-node topic-word weights.
    """
    if levels < 2 or branching < 2:
        raise ValueError("levels and branching must both be >= 2")
    rng = np.random.default_rng(seed)

    def make(path, depth, parent):
        word = "n" + "_".join(map(str, path))
        topics = ["t" + "_".join(map(str, path)) + f"w{k}" for k in range(topic_words)]
        node = Node(word, depth, parent, topic_words=topics,
                    topic_weights=rng.dirichlet(np.full(topic_words, 2.0)))
        nodes.append(node)
        if depth + 1 < levels:
            node.children = [make(path + (b,), depth + 1, node) for b in range(branching)]
        return node

    nodes = []
    root = make((0,), 0, None)
    return Taxonomy(levels, branching, root, nodes)


def generate_lines(tax, n_tokens, seed=0, topics_per_line=10, ancestor_rate=0.05):
    """Corpus lines (lists of tokens) totalling exactly ``n_tokens`` tokens.

    A topic token comes from an ancestor at depth ``k`` with weight
    ``levels - k``, so general topics are the most frequent.  An ancestor
    ``j`` generations above the leaf is inserted with probability
    ``ancestor_rate * j``.
    """
    rng = np.random.default_rng(seed)
    leaves = tax.leaves
    vocab = []
    topic_offset = {}
    for node in tax.nodes:
        topic_offset[node.word] = len(vocab)
        vocab.extend(node.topic_words)
    word_id = {n.word: len(vocab) + i for i, n in enumerate(tax.nodes)}
    vocab.extend(tax.words)

    L = tax.levels
    chain = np.array([[word_id[a.word] for a in [leaf, *leaf.ancestors()]][::-1]
                      for leaf in leaves])                      # (leaves, L) root first
    chain_topic = np.array([[topic_offset[a.word] for a in [leaf, *leaf.ancestors()]][::-1]
                            for leaf in leaves])
    cum = {n.word: np.cumsum(n.topic_weights) for n in tax.nodes}
    cum_by_id = np.zeros((len(vocab), len(tax.root.topic_words)))
    for n in tax.nodes:
        cum_by_id[word_id[n.word]] = cum[n.word]
    depth_p = np.arange(L, 0, -1, dtype=float)
    depth_p /= depth_p.sum()

    width = 1 + topics_per_line + (L - 1)
    approx_len = 1 + topics_per_line + ancestor_rate * (L - 1) * L / 2
    n_lines = int(n_tokens / approx_len * 1.05) + 10
    lines = []
    produced = 0
    while produced < n_tokens:
        leaf = rng.integers(len(leaves), size=n_lines)
        grid = np.full((n_lines, width), -1, dtype=np.int64)
        grid[:, 0] = chain[leaf, L - 1]
        depth = rng.choice(L, p=depth_p, size=(n_lines, topics_per_line))
        owner = chain[leaf[:, None], depth]
        u = rng.random((n_lines, topics_per_line, 1))
        k = (u > cum_by_id[owner]).sum(axis=-1)
        k = np.minimum(k, cum_by_id.shape[1] - 1)
        grid[:, 1:1 + topics_per_line] = chain_topic[leaf[:, None], depth] + k
        for gen in range(1, L):
            present = rng.random(n_lines) < ancestor_rate * gen
            grid[present, topics_per_line + gen] = chain[leaf[present], L - 1 - gen]
        order = np.argsort(rng.random(grid.shape), axis=1)
        grid = np.take_along_axis(grid, order, axis=1)
        for row in grid:
            toks = [vocab[t] for t in row if t >= 0]
            if produced + len(toks) > n_tokens:
                toks = toks[:n_tokens - produced]
            lines.append(toks)
            produced += len(toks)
            if produced >= n_tokens:
                break
    return lines


def generate_corpus(tax, n_tokens, seed=0, **kwargs):
    """Token stream of :func:`generate_lines`, flattened."""
    for line in generate_lines(tax, n_tokens, seed, **kwargs):
        yield from line


def write_corpus(tax, n_tokens, path, seed=0, **kwargs):
    with open(path, "w", encoding="utf-8") as fh:
        for line in generate_lines(tax, n_tokens, seed, **kwargs):
            fh.write(" ".join(line))
            fh.write("\n")


def planted_pairs(tax, negatives_seed=0):
    """Positive (descendant, ancestor) pairs plus an equal number of negatives.

    Negatives are a third reversed positives, a third sibling pairs and a
    third unrelated pairs; when a pool runs dry the others fill in.
    """
    rng = np.random.default_rng(negatives_seed)
    positives = [(n.word, a.word) for n in tax.nodes for a in n.ancestors()]
    n_pos = len(positives)
    pos_set = set(positives)

    reversed_pool = [(b, a) for a, b in positives]
    sibling_pool = [(a.word, b.word) for n in tax.nodes
                    for a, b in itertools.permutations(n.children, 2)]
    related = pos_set | set(reversed_pool) | set(sibling_pool)
    random_pool = [(a, b) for a, b in itertools.permutations(tax.words, 2)
                   if (a, b) not in related]

    quotas = [n_pos // 3, n_pos // 3, n_pos - 2 * (n_pos // 3)]
    pools = [list(reversed_pool), sibling_pool, random_pool]
    for pool in pools:
        rng.shuffle(pool)
    chosen = []
    taken = [0, 0, 0]
    for i, quota in enumerate(quotas):
        take = min(quota, len(pools[i]))
        chosen.extend(pools[i][:take])
        taken[i] = take
    for i, pool in enumerate(pools):
        while len(chosen) < n_pos and taken[i] < len(pool):
            chosen.append(pool[taken[i]])
            taken[i] += 1

    pairs = [LabeledPair(a, b, True) for a, b in positives]
    pairs += [LabeledPair(a, b, False) for a, b in chosen]
    return pairs
