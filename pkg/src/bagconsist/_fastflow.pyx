# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Dinic max-flow kernel.

Graph bookkeeping (adjacency, levels, iteration pointers) is C-typed;
capacities stay Python ints so arbitrary-precision multiplicities are exact.
Mirrors the pure-Python twin in ``_pyflow``.
"""
from cpython.mem cimport PyMem_Malloc, PyMem_Free

IMPLEMENTATION = "cython"


def dinic(int num_nodes, arcs, int source, int sink):
    """Exact integral max flow; same contract as ``_pyflow.dinic``."""
    cdef int n_arcs = len(arcs)
    cdef int n_edges = 2 * n_arcs
    cdef int *head = <int *> PyMem_Malloc(n_edges * sizeof(int))
    cdef int *nxt = <int *> PyMem_Malloc(n_edges * sizeof(int))
    cdef int *first = <int *> PyMem_Malloc(num_nodes * sizeof(int))
    cdef int *level = <int *> PyMem_Malloc(num_nodes * sizeof(int))
    cdef int *it = <int *> PyMem_Malloc(num_nodes * sizeof(int))
    cdef int *queue = <int *> PyMem_Malloc(num_nodes * sizeof(int))
    if head == NULL or nxt == NULL or first == NULL or level == NULL \
            or it == NULL or queue == NULL:
        PyMem_Free(head)
        PyMem_Free(nxt)
        PyMem_Free(first)
        PyMem_Free(level)
        PyMem_Free(it)
        PyMem_Free(queue)
        raise MemoryError()

    cap = [0] * n_edges  # Python ints: exact big-integer arithmetic
    cdef int i, u, v, a, qh, qt
    cdef list stack_node, stack_limit

    try:
        for i in range(num_nodes):
            first[i] = -1
        for i in range(n_arcs):
            u, v, c = arcs[i]
            head[2 * i] = v
            nxt[2 * i] = first[u]
            first[u] = 2 * i
            cap[2 * i] = c
            head[2 * i + 1] = u
            nxt[2 * i + 1] = first[v]
            first[v] = 2 * i + 1

        total = 0
        while True:
            # BFS level graph
            for i in range(num_nodes):
                level[i] = -1
            level[source] = 0
            queue[0] = source
            qh = 0
            qt = 1
            while qh < qt:
                u = queue[qh]
                qh += 1
                a = first[u]
                while a != -1:
                    v = head[a]
                    if level[v] < 0 and cap[a] > 0:
                        level[v] = level[u] + 1
                        queue[qt] = v
                        qt += 1
                    a = nxt[a]
            if level[sink] < 0:
                break
            for i in range(num_nodes):
                it[i] = first[i]
            # iterative blocking-flow DFS
            while True:
                pushed = _augment(head, nxt, it, level, cap, source, sink)
                if pushed == 0:
                    break
                total = total + pushed

        flows = [cap[2 * i + 1] for i in range(n_arcs)]
        return total, flows
    finally:
        PyMem_Free(head)
        PyMem_Free(nxt)
        PyMem_Free(first)
        PyMem_Free(level)
        PyMem_Free(it)
        PyMem_Free(queue)


cdef _augment(int *head, int *nxt, int *it, int *level, list cap,
              int source, int sink):
    """Push one augmenting path along the level graph; returns 0 when the
    blocking flow is complete."""
    path = []  # arc indices on the current path
    cdef int u = source
    cdef int v, a
    while True:
        if u == sink:
            bottleneck = None
            for a in path:
                c = cap[a]
                if bottleneck is None or c < bottleneck:
                    bottleneck = c
            for a in path:
                cap[a] = cap[a] - bottleneck
                cap[a ^ 1] = cap[a ^ 1] + bottleneck
            return bottleneck
        a = it[u]
        advanced = False
        while a != -1:
            v = head[a]
            if level[v] == level[u] + 1 and cap[a] > 0:
                it[u] = a
                path.append(a)
                u = v
                advanced = True
                break
            a = nxt[a]
        if advanced:
            continue
        it[u] = -1
        level[u] = -1  # dead end: prune
        if not path:
            return 0
        a = path.pop()
        u = head[a ^ 1]
