//! The campaign catalog: every library operation is reachable from exactly
//! one subcommand, and every parameter a subcommand accepts is listed with
//! its type so configs can be validated against the schema.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    /// One of int, real, prob, path, flag, string, grid.
    pub kind: &'static str,
    pub required: bool,
    pub default: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CampaignSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    /// Library operations this subcommand drives, as module.op names.
    pub ops: &'static [&'static str],
}

const fn p(name: &'static str, kind: &'static str, required: bool, default: Option<&'static str>) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required,
        default,
    }
}

pub const CAMPAIGNS: &[CampaignSpec] = &[
    CampaignSpec {
        name: "fourier-roundtrip",
        about: "transform/inverse round-trips and Parseval on random functions",
        params: &[
            p("n", "int", true, None),
            p("p", "prob", false, Some("0.25")),
            p("trials", "int", false, Some("100")),
            p("orthonormality", "flag", false, None),
        ],
        ops: &["fourier.transform", "fourier.inverse_transform"],
    },
    CampaignSpec {
        name: "noise-check",
        about: "one-sided noise: Fourier multiplier vs exact coupling expectation",
        params: &[
            p("n", "int", true, None),
            p("q", "prob", true, None),
            p("p", "prob", true, None),
            p("trials", "int", false, Some("50")),
            p("samples", "int", false, None),
        ],
        ops: &[
            "fourier.one_sided_noise",
            "fourier.coupling_expectation",
            "fourier.sample_coupled_pair",
        ],
    },
    CampaignSpec {
        name: "fkg-suite",
        about: "FKG correlation checks over monotone pairs",
        params: &[
            p("n", "int", true, None),
            p("p", "prob", false, Some("0.3")),
            p("pairs", "int", false, Some("1000")),
            p("exhaustive", "flag", false, None),
        ],
        ops: &["cube.fkg_check", "cube.is_monotone", "cube.measure"],
    },
    CampaignSpec {
        name: "globalness",
        about: "certify the smallest g for which a family is g-global",
        params: &[p("input", "path", true, None), p("p", "prob", true, None)],
        ops: &["globalness.certify_globalness"],
    },
    CampaignSpec {
        name: "extract-global",
        about: "extract a g-global restriction, or sweep random monotone families",
        params: &[
            p("input", "path", false, None),
            p("p", "prob", true, None),
            p("g", "real", true, None),
            p("random", "int", false, None),
            p("n", "int", false, None),
            p("save", "path", false, None),
        ],
        ops: &["globalness.extract_global_restriction", "cube.restrict"],
    },
    CampaignSpec {
        name: "level-d-audit",
        about: "level-d bound shape and implied constants for a family",
        params: &[
            p("input", "path", true, None),
            p("p", "prob", true, None),
            p("g", "real", true, None),
            p("d-max", "int", true, None),
        ],
        ops: &["globalness.level_d_audit", "fourier.level_weight"],
    },
    CampaignSpec {
        name: "sharp-probe",
        about: "sharp-threshold probe; with a second family, the cross probe",
        params: &[
            p("input", "path", true, None),
            p("p", "prob", true, None),
            p("t", "int", true, None),
            p("input-b", "path", false, None),
            p("g", "real", false, None),
            p("c3", "real", false, None),
        ],
        ops: &[
            "globalness.sharp_threshold_probe",
            "globalness.global_cross_probe",
        ],
    },
    CampaignSpec {
        name: "search-max",
        about: "exact maximum (cross) t-intersecting families in S_n",
        params: &[
            p("n", "int", true, None),
            p("t", "int", true, None),
            p("mode", "string", false, Some("single")),
        ],
        ops: &[
            "families.max_t_intersecting",
            "families.agreement",
            "families.is_t_intersecting",
        ],
    },
    CampaignSpec {
        name: "search-max-cube",
        about: "exact maximum mu_p over t-intersecting cube families",
        params: &[
            p("n", "int", true, None),
            p("t", "int", true, None),
            p("p", "prob", true, None),
        ],
        ops: &["families.max_t_intersecting_cube"],
    },
    CampaignSpec {
        name: "verify-ak",
        about: "AK family measures, regime membership, and the 0.85^t sweep",
        params: &[
            p("t", "int", false, Some("1")),
            p("r", "int", false, Some("1")),
            p("p", "prob", false, Some("1/3")),
            p("sweep", "flag", false, None),
            p("t-max", "int", false, Some("10")),
            p("r-max", "int", false, Some("5")),
        ],
        ops: &["families.ak_family", "families.ak_bound_check"],
    },
    CampaignSpec {
        name: "counterexample",
        about: "the >= t+1 fixed points family that beats (n-t)!",
        params: &[
            p("n", "int", true, None),
            p("t", "int", true, None),
            p("save", "path", false, None),
        ],
        ops: &["families.counterexample_family"],
    },
    CampaignSpec {
        name: "stability",
        about: "the 1 - 1/e stability pair and its cross-intersection check",
        params: &[
            p("n", "int", true, None),
            p("t", "int", true, None),
            p("save-a", "path", false, None),
            p("save-b", "path", false, None),
        ],
        ops: &["families.stability_family", "families.is_cross_t_intersecting"],
    },
    CampaignSpec {
        name: "coupling",
        about: "matching coupling samples, sigma-marginal stats, embedding factors",
        params: &[
            p("n", "int", true, None),
            p("p", "prob", false, None),
            p("samples", "int", false, Some("10000")),
            p("word", "string", false, None),
            p("fidelity", "int", false, None),
        ],
        ops: &[
            "embed.coupling_sample",
            "embed.embed_perm",
            "embed.embed_word",
            "embed.embedding_measure_factor",
        ],
    },
    CampaignSpec {
        name: "hall-bound",
        about: "mu_p of the up-closure of E(S_n): exact, Monte Carlo, union bound",
        params: &[
            p("n", "int", true, None),
            p("p", "prob", false, None),
            p("mode", "string", false, Some("auto")),
            p("samples", "int", false, Some("10000")),
            p("matrix", "path", false, None),
        ],
        ops: &["embed.hall_bound", "embed.hall_membership", "cube.up_closure"],
    },
    CampaignSpec {
        name: "bump",
        about: "dictatorship density table of a permutation family",
        params: &[p("input", "path", true, None)],
        ops: &["bump.density_bump"],
    },
    CampaignSpec {
        name: "chain",
        about: "greedy t-step restriction chain toward a t-umvirate",
        params: &[
            p("input-a", "path", true, None),
            p("input-b", "path", false, None),
            p("umvirate-b", "string", false, None),
            p("t", "int", true, None),
        ],
        ops: &["bump.restriction_chain", "families.umvirate"],
    },
    CampaignSpec {
        name: "audit-claim52",
        about: "density-concentration arithmetic checks",
        params: &[
            p("n", "int", false, None),
            p("t", "int", false, Some("1")),
            p("a", "real", false, Some("50")),
            p("c", "prob", false, Some("2/3")),
            p("grid", "grid", false, None),
        ],
        ops: &["bump.audit_claim52"],
    },
    CampaignSpec {
        name: "audit-bootstrap",
        about: "bootstrapping inequality checks with exact factorial arithmetic",
        params: &[
            p("n", "int", false, None),
            p("t", "int", false, Some("1")),
            p("grid", "grid", false, None),
        ],
        ops: &["bump.audit_bootstrap", "families.derangement_count"],
    },
    CampaignSpec {
        name: "audit-prop41",
        about: "case-splitting inequality instances and boundaries",
        params: &[
            p("n", "int", true, None),
            p("t", "int", true, None),
            p("k", "int", false, Some("50")),
            p("c", "prob", false, Some("2/3")),
            p("g", "real", false, Some("4")),
        ],
        ops: &["bump.audit_prop41_cases"],
    },
    CampaignSpec {
        name: "basis-bound",
        about: "induction-basis counting bound, exact at small n",
        params: &[p("n", "int", true, None), p("t", "int", true, None)],
        ops: &["bump.induction_basis_bound"],
    },
    CampaignSpec {
        name: "r-audit",
        about: "r(n,t) values and the recursion monotonicity facts",
        params: &[
            p("n", "int", false, None),
            p("t", "int", false, Some("1")),
            p("c0", "int", false, Some("500")),
            p("grid", "grid", false, None),
        ],
        ops: &["bump.r_of"],
    },
    CampaignSpec {
        name: "list-campaigns",
        about: "this catalog, with parameter schemas",
        params: &[],
        ops: &["cli.list_campaigns"],
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn subcommand_names_unique() {
        let mut seen = BTreeSet::new();
        for c in CAMPAIGNS {
            assert!(seen.insert(c.name), "duplicate subcommand {}", c.name);
        }
    }

    #[test]
    fn every_op_reachable_exactly_once() {
        let mut seen = BTreeSet::new();
        for c in CAMPAIGNS {
            for op in c.ops {
                assert!(seen.insert(*op), "op {op} served twice");
            }
        }
        let expected: BTreeSet<&str> = [
            "cube.measure",
            "cube.restrict",
            "cube.up_closure",
            "cube.is_monotone",
            "cube.fkg_check",
            "fourier.transform",
            "fourier.inverse_transform",
            "fourier.level_weight",
            "fourier.one_sided_noise",
            "fourier.coupling_expectation",
            "fourier.sample_coupled_pair",
            "globalness.certify_globalness",
            "globalness.extract_global_restriction",
            "globalness.level_d_audit",
            "globalness.sharp_threshold_probe",
            "globalness.global_cross_probe",
            "families.agreement",
            "families.is_t_intersecting",
            "families.is_cross_t_intersecting",
            "families.umvirate",
            "families.max_t_intersecting",
            "families.counterexample_family",
            "families.stability_family",
            "families.derangement_count",
            "families.ak_family",
            "families.ak_bound_check",
            "families.max_t_intersecting_cube",
            "embed.embed_perm",
            "embed.embed_word",
            "embed.embedding_measure_factor",
            "embed.coupling_sample",
            "embed.hall_membership",
            "embed.hall_bound",
            "bump.density_bump",
            "bump.restriction_chain",
            "bump.audit_claim52",
            "bump.audit_bootstrap",
            "bump.audit_prop41_cases",
            "bump.induction_basis_bound",
            "bump.r_of",
            "cli.run",
            "cli.list_campaigns",
        ]
        .into_iter()
        .collect();
        let missing: Vec<&&str> = expected.difference(&seen).collect();
        // cli.run is the dispatcher itself
        assert!(
            missing.iter().all(|m| **m == "cli.run"),
            "unreachable ops: {missing:?}"
        );
        let extra: Vec<&&str> = seen.difference(&expected).collect();
        assert!(extra.is_empty(), "unknown ops in catalog: {extra:?}");
    }

    #[test]
    fn catalog_includes_named_examples() {
        let names: Vec<&str> = CAMPAIGNS.iter().map(|c| c.name).collect();
        for required in ["search-max", "verify-ak", "level-d-audit"] {
            assert!(names.contains(&required));
        }
    }
}
