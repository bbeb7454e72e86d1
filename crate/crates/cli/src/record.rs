//! Machine-readable result records.

use serde::{Deserialize, Serialize};

use dimp8::{Diagnostics, Matching, OracleOutcome, SolveOutcome, SolveStatus, Weight, Wt};

pub const DIM_FOUND: &str = "dim_found";
pub const NO_DIM: &str = "no_dim";
pub const NO_FINITE_DIM: &str = "no_finite_dim";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightField {
    Finite(u64),
    /// Always `"inf"`.
    Text(String),
}

impl From<Wt> for WeightField {
    fn from(w: Wt) -> Self {
        match w {
            Weight::Finite(x) => WeightField::Finite(x),
            Weight::Infinite => WeightField::Text("inf".into()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub branches: u64,
    pub xy_tried: u64,
    pub millis: u64,
    pub incomplete: bool,
    /// 1-based vertex ids along the path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p8_witness: Option<Vec<usize>>,
}

impl From<&Diagnostics> for DiagnosticsRecord {
    fn from(d: &Diagnostics) -> Self {
        DiagnosticsRecord {
            branches: d.branches,
            xy_tried: d.xy_tried,
            millis: d.millis,
            incomplete: d.incomplete,
            p8_witness: d.p8_witness.as_ref().map(|p| p.iter().map(|v| v + 1).collect()),
        }
    }
}

/// Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub status: String,
    /// 1-based pairs, present only for `dim_found`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightField>,
    pub diagnostics: DiagnosticsRecord,
}

fn one_based(m: &Matching) -> Vec<[usize; 2]> {
    m.iter().map(|e| [e.u() + 1, e.v() + 1]).collect()
}

impl ResultRecord {
    pub fn from_solve(out: &SolveOutcome) -> Self {
        let diagnostics = DiagnosticsRecord::from(&out.diagnostics);
        match &out.status {
            SolveStatus::DimFound(m, w) => ResultRecord {
                status: DIM_FOUND.into(),
                edges: Some(one_based(m)),
                weight: Some((*w).into()),
                diagnostics,
            },
            SolveStatus::NoDim => ResultRecord {
                status: NO_DIM.into(),
                edges: None,
                weight: None,
                diagnostics,
            },
            SolveStatus::NoFiniteDim => ResultRecord {
                status: NO_FINITE_DIM.into(),
                edges: None,
                weight: Some(Weight::Infinite.into()),
                diagnostics,
            },
        }
    }

    pub fn from_oracle(out: &OracleOutcome, millis: u64) -> Self {
        let diagnostics = DiagnosticsRecord {
            millis,
            ..DiagnosticsRecord::default()
        };
        match out {
            OracleOutcome::Found(m, w) if w.is_finite() => ResultRecord {
                status: DIM_FOUND.into(),
                edges: Some(one_based(m)),
                weight: Some((*w).into()),
                diagnostics,
            },
            OracleOutcome::Found(..) => ResultRecord {
                status: NO_FINITE_DIM.into(),
                edges: None,
                weight: Some(Weight::Infinite.into()),
                diagnostics,
            },
            OracleOutcome::NoDim => ResultRecord {
                status: NO_DIM.into(),
                edges: None,
                weight: None,
                diagnostics,
            },
        }
    }

    pub fn found(&self) -> bool {
        self.status == DIM_FOUND
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    /// Short multi-line text for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!("status: {}\n", self.status);
        if let Some(w) = &self.weight {
            match w {
                WeightField::Finite(x) => out += &format!("weight: {x}\n"),
                WeightField::Text(t) => out += &format!("weight: {t}\n"),
            }
        }
        if let Some(edges) = &self.edges {
            let list: Vec<String> = edges.iter().map(|[u, v]| format!("{u}-{v}")).collect();
            out += &format!("edges: {}\n", list.join(" "));
        }
        let d = &self.diagnostics;
        out += &format!(
            "branches: {} xy_tried: {} millis: {} incomplete: {}\n",
            d.branches, d.xy_tried, d.millis, d.incomplete
        );
        if let Some(p) = &d.p8_witness {
            let list: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            out += &format!("induced P8: {}\n", list.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dimp8::Edge;

    #[test]
    fn key_order_and_shapes() {
        let out = SolveOutcome {
            status: SolveStatus::DimFound(
                [Edge::new(1, 2), Edge::new(4, 5)].into_iter().collect(),
                Weight::Finite(2),
            ),
            diagnostics: Diagnostics::default(),
        };
        assert_eq!(
            ResultRecord::from_solve(&out).to_json(),
            r#"{"status":"dim_found","edges":[[2,3],[5,6]],"weight":2,"diagnostics":{"branches":0,"xy_tried":0,"millis":0,"incomplete":false}}"#
        );
        let none = SolveOutcome {
            status: SolveStatus::NoFiniteDim,
            diagnostics: Diagnostics::default(),
        };
        let json = ResultRecord::from_solve(&none).to_json();
        assert!(json.starts_with(r#"{"status":"no_finite_dim","weight":"inf","#));
        let back: ResultRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.weight, Some(WeightField::Text("inf".into())));
    }
}
