//! Each kind of check is tied to exactly one statement it verifies.

pub const REGISTRY: &[(&str, &str)] = &[
    ("pindep.rank", "p-independence:jacobian-rank"),
    ("pindep.fermat-matrix", "fermat-hypersurface:regularity-criterion"),
    ("pindep.exchange", "p-independence:exchange"),
    ("pindep.seeded-identities", "rational-function-field:identities"),
    ("kollar.equation", "degree-p-hypersurface:equation"),
    ("kollar.regularity", "degree-p-hypersurface:regular"),
    ("kollar.nonsmooth-support", "degree-p-hypersurface:nonsmooth-locus"),
    ("kollar.eisenstein", "degree-p-hypersurface:geometrically-integral"),
    ("kollar.unirationality-ingredients", "degree-p-hypersurface:not-unirational-ingredients"),
    ("kollar.rationality-witness", "degree-p-hypersurface:geometrically-rational"),
    ("kollar.point-count", "degree-p-hypersurface:rational-points"),
    ("kollar.laurent", "degree-p-hypersurface:laurent-points"),
    ("cubic2.equation", "cubic:equation"),
    ("cubic2.jacobian-identity", "cubic:nonsmooth-locus"),
    ("cubic2.regular-inseparable-points", "cubic:regular"),
    ("cubic2.singular-point", "cubic:stratification-non-normal"),
    ("cubic2.tensor-field", "cubic:tensor-product-field"),
    ("cubic2.fiber", "cubic:conic-fibration"),
    ("cubic2.conics-disjoint", "cubic:disjoint-conics"),
    ("cubic2.frobenius-base-change", "frobenius-base-change:constant-conic"),
    ("cubic2.rationality-over-root", "cubic:rational-over-root-extension"),
    ("cubic2.tangent-section", "cubic:tangent-sections"),
    ("cubic2.picard-lattice", "cubic:picard-lattice"),
    ("cubic2.discriminant-group", "cubic:picard-discriminant"),
    ("cubic2.stratification", "cubic:regularity-stratification"),
];

pub fn anchor_for(kind: &str) -> Option<&'static str> {
    REGISTRY.iter().find(|(k, _)| *k == kind).map(|(_, a)| *a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn kinds_are_unique() {
        let kinds: HashSet<_> = REGISTRY.iter().map(|(k, _)| k).collect();
        assert_eq!(kinds.len(), REGISTRY.len());
    }
}
