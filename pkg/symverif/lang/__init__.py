"""
The imperative language: syntax, parser and interpreter
"""
from .syntax import (Apply, Assign, Command, For, If, Num, Pi, ProgramExpr,
                     Seq, Skip, Var, VarDecl, While, count_assignments,
                     format_command, iter_statements, modified_vars,
                     sequence, statement_at, used_vars)
from .parser import parse_expression, parse_program
from .interpreter import Fuel, eval_expr, interpret
