"""Shared small algebras used across the test modules."""

from albv.algebroid import lie_algebra


def sl2():
    return lie_algebra(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})


def aff1():
    return lie_algebra(2, {(0, 1): {1: 1}})


def heisenberg():
    return lie_algebra(3, {(0, 1): {2: 1}})
