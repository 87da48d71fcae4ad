"""Lark grammar for Language E problem files and queries."""

from __future__ import annotations

from typing import Final

GRAMMAR: Final = r"""
problem: (statement ".")*

?statement: fluent_decl
          | action_decl
          | horizon_decl
          | causal_law
          | occurrence
          | observation
          | constraint
          | precondition
          | goal_decl

fluent_decl: "fluent" name_list
action_decl: "action" name_list
horizon_decl: "horizon" NAT
causal_law: NAME effect NAME ["when" condition]
!effect: "initiates" | "terminates"
occurrence: NAME "happens-at" NAT
observation: tprop
constraint: literal "whenever" condition
precondition: NAME "needs" condition
goal_decl: "goal" tprop ("," tprop)*

query: tprop ("," tprop)*
plan: (event ","?)*
event: NAME ("happens-at" | "@") NAT

name_list: NAME ("," NAME)*
condition: "{" [literal ("," literal)*] "}"
tprop: literal "holds-at" NAT
literal: NEG? NAME

NEG: "-"
NAME: /[A-Za-z][A-Za-z0-9_]*/
NAT: /[0-9]+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""
