"""Regex synthesis toolkit: learn regexes from positive/negative examples.

Subpackages:
  rx          regex AST, parsing/printing, matching, simplification
  examples    example generation, ground-truth split labels, preprocessing
  alpharegex  best-first enumerative synthesis with approximation pruning
  bluefringe  state-merging DFA induction and DFA-to-regex conversion
  splitter    split labelings, partitions, and pluggable splitters
  framework   divide-and-conquer synthesis over split positive examples
  harness     benchmark execution, metrics, and reports
"""

__version__ = "0.1.0"
