from typing import Optional

from src.algebra.fields import FieldDescriptor, FieldElement
from src.algebra.pbasis import pth_root
from src.formulas.ast import Der, ExistsPth, Language, Sroot
from src.oracles.model_oracle import Env, ModelOracle
from src.utils.errors import WrongDescriptorError


class DcfOracle(ModelOracle):
    """(F_p(t), d/dt): differentially perfect, its constants are exactly the pth powers."""

    kind = "dcf"
    language = Language.DCF

    def __init__(self, p: int):
        if p < 2:
            raise WrongDescriptorError("the dcf oracle needs a prime characteristic")
        super().__init__(FieldDescriptor.rational_functions(p, ("t",)))
        self.p = p

    def spec(self) -> str:
        return f"dcf:p={self.p}"

    def s(self, value: FieldElement) -> FieldElement:
        """The pth root of a constant, 0 for anything else."""
        if value.derive():
            return self.descriptor.zero
        root = pth_root(value)
        return self.descriptor.zero if root is None else root

    def witness(self, value: FieldElement) -> Optional[FieldElement]:
        """The unique z with z^p = value, if any."""
        return pth_root(value)

    def special_term(self, term, env: Env) -> FieldElement:
        if isinstance(term, Der):
            return self.eval_term(term.arg, env).derive()
        if isinstance(term, Sroot):
            return self.s(self.eval_term(term.arg, env))
        return super().special_term(term, env)

    def special_node(self, node, env: Env) -> bool:
        if isinstance(node, ExistsPth):
            root = self.witness(self.eval_term(node.term, env))
            if root is None:
                return False
            return self.eval_node(node.body, self.bind(env, {node.variable: root}))
        return super().special_node(node, env)
