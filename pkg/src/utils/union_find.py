# src/utils/union_find.py
"""Disjoint sets over 0..size-1, used for product graphs and relation joins."""
from typing import Dict, List


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; False if they were already merged."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def groups(self) -> List[List[int]]:
        """Classes in order of their least member, members ascending."""
        seen: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            seen.setdefault(self.find(x), []).append(x)
        return list(seen.values())

    def labels(self) -> List[int]:
        """Class index per element, numbered by first appearance."""
        index: Dict[int, int] = {}
        return [index.setdefault(self.find(x), len(index)) for x in range(len(self.parent))]

    def __len__(self) -> int:
        return sum(1 for x in range(len(self.parent)) if self.find(x) == x)
