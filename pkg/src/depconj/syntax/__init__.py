"""Object-language syntax: AST, signatures, contexts, and the checks
and transformations defined directly on them."""

from .nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS,
    ExistsT, ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType,
    Span, Statement, Term, Top, Type, Var, WarrantRef,
    bound_names, desc_referenced, free_names, free_term_vars,
    free_warrantors, fresh_name, has_holes, is_low_level, subnodes,
    uses_description,
)
from .signature import (
    EMPTY_SIGNATURE, FunDecl, Param, PredDecl, Signature, TermParam,
    WarrantParam,
)
from .context import Assume, Context, ContextEntry, SetDecl, TypeDecl, extend_context
from .subst import instantiate_schema, rename_warrantor, substitute, substitute_many
from .equality import context_env, contexts_struct_eq, env_struct_eq, struct_eq
from .wellformed import (
    check_entry, erase, erase_term, is_meaningful, meaningful, synth_type,
    validate_context, validate_signature, validate_type,
)

__all__ = [
    "And", "App", "Assume", "BaseType", "Compr", "ComprSet", "Context",
    "ContextEntry", "DepAnd", "DepImp", "Desc", "EMPTY_SIGNATURE", "Eq",
    "ExistsS", "ExistsT", "ExistsUniqueT", "ForallS", "ForallT", "FunDecl",
    "Imp", "Mem", "Or", "Param", "Pred", "PredDecl", "SetDecl", "SetType",
    "Signature", "Span", "Statement", "Term", "TermParam", "Top", "Type",
    "TypeDecl", "Var", "WarrantParam", "WarrantRef",
    "bound_names", "check_entry", "context_env", "contexts_struct_eq",
    "desc_referenced", "env_struct_eq", "erase", "erase_term",
    "extend_context",
    "free_names", "free_term_vars", "free_warrantors", "fresh_name",
    "has_holes", "instantiate_schema", "is_low_level", "is_meaningful",
    "meaningful", "rename_warrantor", "struct_eq", "subnodes", "substitute",
    "substitute_many", "synth_type", "uses_description", "validate_context",
    "validate_signature", "validate_type",
]
