import sys

# the engine and evaluator walk deep terms recursively
sys.setrecursionlimit(20_000)
