//! Built-in scenarios with their expected verdicts.
//!
//! Each scenario is an embedded `.mdag` document plus the answers the
//! analysis must give for it. They double as regression tests and as demo
//! inputs for the command-line tool.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dsl;
use crate::graph::{MDag, NodeId};
use crate::validity::{self, VerdictStatus::{self, PossiblyBiased as B, Unbiased as U}};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scenario `{0}`")]
pub struct UnknownScenario(pub String);

/// What [`crate::validity::analyze`] must report for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub phi: &'static [&'static str],
    pub cra: VerdictStatus,
    pub full_mi: VerdictStatus,
    /// Verdicts for specific restrictions `Q`, by variable name.
    pub subsamples: &'static [(&'static [&'static str], VerdictStatus)],
    /// No restriction at all (including the empty one) is unbiased.
    pub no_unbiased_subsample: bool,
    /// Outcome self-missingness warning.
    pub warning: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    pub id: &'static str,
    pub document: &'static str,
    pub expected: Expected,
}

impl Scenario {
    pub fn graph(&self) -> MDag {
        dsl::parse(self.document).expect("catalog documents are valid")
    }

    pub fn names(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    /// Every way the analysis of this scenario departs from `expected`.
    pub fn mismatches(&self) -> Vec<String> {
        let g = self.graph();
        let report = validity::analyze(&g);
        let e = &self.expected;
        let mut out = Vec::new();

        let phi: BTreeSet<String> = g.names(&report.phi).into_iter().collect();
        if phi != Self::names(e.phi) {
            out.push(format!("phi: expected {:?}, got {:?}", e.phi, phi));
        }
        if report.cra.status != e.cra {
            out.push(format!("cra: expected {}, got {}", e.cra, report.cra.status));
        }
        if report.full_mi.status != e.full_mi {
            out.push(format!("full MI: expected {}, got {}", e.full_mi, report.full_mi.status));
        }
        for (q, want) in e.subsamples {
            let ids: BTreeSet<NodeId> = q.iter().map(|n| g.variable_id(n).expect("catalog names exist")).collect();
            match validity::subsample_verdict(&g, &ids) {
                Ok(o) if o.verdict.status == *want => {}
                Ok(o) => out.push(format!("Q={q:?}: expected {want}, got {}", o.verdict.status)),
                Err(err) => out.push(format!("Q={q:?}: {err}")),
            }
        }
        let none = report.unbiased_options().next().is_none();
        if none != e.no_unbiased_subsample {
            out.push(format!("no unbiased subsample: expected {}, got {none}", e.no_unbiased_subsample));
        }
        if report.warning.flagged != e.warning {
            out.push(format!("warning: expected {}, got {}", e.warning, report.warning.flagged));
        }
        out
    }
}

macro_rules! doc {
    ($id:literal) => {
        include_str!(concat!("../catalog/", $id, ".mdag"))
    };
}

const NONE: &[(&[&str], VerdictStatus)] = &[];

static SCENARIOS: &[Scenario] = &[
    Scenario {
        id: "fig1a",
        document: doc!("fig1a"),
        expected: Expected {
            phi: &["X", "Y"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X"], U), (&["Y"], U)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig1b",
        document: doc!("fig1b"),
        expected: Expected {
            phi: &["X", "Y"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], U), (&["X"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig2_motivating",
        document: doc!("fig2_motivating"),
        expected: Expected {
            phi: &["IQ15", "SEP", "eduscore", "smoking"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["SEP", "smoking"], U), (&["SEP"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig2_sep_edu",
        document: doc!("fig2_sep_edu"),
        expected: Expected {
            phi: &["IQ15", "SEP", "eduscore", "smoking"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["SEP", "smoking"], U), (&["SEP"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig3a",
        document: doc!("fig3a"),
        expected: Expected {
            phi: &["X", "Y"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X"], U), (&["Y"], U)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig3b",
        document: doc!("fig3b"),
        expected: Expected {
            phi: &["X", "Y"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], U), (&["X"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig4",
        document: doc!("fig4"),
        expected: Expected {
            phi: &["W", "X", "Y"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X"], U), (&["W"], U), (&["W", "X"], U), (&["Y"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig5a",
        document: doc!("fig5a"),
        expected: Expected {
            phi: &["W", "Y"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], U), (&["W"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "fig5b",
        document: doc!("fig5b"),
        expected: Expected {
            phi: &["W", "Y"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], B), (&["W"], B)],
            no_unbiased_subsample: true,
            warning: false,
        },
    },
    Scenario {
        id: "fig5c",
        document: doc!("fig5c"),
        expected: Expected {
            phi: &["W", "X", "Y"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["X", "Y"], U), (&["Y"], B), (&["W"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "figs1",
        document: doc!("figs1"),
        expected: Expected {
            phi: &["A", "Y"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["A"], B)],
            no_unbiased_subsample: true,
            warning: false,
        },
    },
    Scenario {
        id: "figs1_no_aux",
        document: doc!("figs1_no_aux"),
        expected: Expected {
            phi: &[],
            cra: U,
            full_mi: U,
            subsamples: NONE,
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "mb_a",
        document: doc!("mb_a"),
        expected: Expected {
            phi: &[],
            cra: U,
            full_mi: U,
            subsamples: NONE,
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "mb_b",
        document: doc!("mb_b"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X", "Z2"], U), (&["X"], B), (&["Z2"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "mb_c",
        document: doc!("mb_c"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], B)],
            no_unbiased_subsample: true,
            warning: false,
        },
    },
    Scenario {
        id: "mb_d",
        document: doc!("mb_d"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X", "Z2"], U), (&["X"], B), (&["Z2"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "mb_e",
        document: doc!("mb_e"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: U,
            full_mi: B,
            subsamples: &[(&["X", "Z2"], U), (&["X"], B), (&["Z2"], B)],
            no_unbiased_subsample: false,
            warning: false,
        },
    },
    Scenario {
        id: "mb_f",
        document: doc!("mb_f"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: B,
            full_mi: B,
            subsamples: &[(&["Y"], B)],
            no_unbiased_subsample: true,
            warning: false,
        },
    },
    Scenario {
        id: "mb_g",
        document: doc!("mb_g"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: B,
            full_mi: B,
            subsamples: NONE,
            no_unbiased_subsample: true,
            warning: true,
        },
    },
    Scenario {
        id: "mb_h",
        document: doc!("mb_h"),
        expected: Expected {
            phi: &["X", "Y", "Z2"],
            cra: B,
            full_mi: B,
            subsamples: NONE,
            no_unbiased_subsample: true,
            warning: true,
        },
    },
];

/// All scenarios, sorted by id.
pub fn all() -> &'static [Scenario] {
    SCENARIOS
}

/// Scenario ids in sorted order.
pub fn list() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.id).collect()
}

pub fn get(id: &str) -> Result<&'static Scenario, UnknownScenario> {
    SCENARIOS.iter().find(|s| s.id == id).ok_or_else(|| UnknownScenario(id.to_string()))
}
