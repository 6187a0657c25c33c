//! Fixed workloads shared by the benchmarks.

use scount::numberfield::{FieldConfig, FieldDesc};
use scount::rational::{int, parse};
use scount::{PlaceSet, Rational};

pub struct Workload {
    pub name: &'static str,
    pub ps: PlaceSet,
    pub n: u32,
    pub h: Rational,
}

fn from_json(json: &str) -> PlaceSet {
    FieldConfig::from_json(json).and_then(|c| c.placeset()).expect("valid workload config")
}

/// Point-counting workloads, smallest first.
pub fn vector_workloads() -> Vec<Workload> {
    vec![
        Workload { name: "Z[1/2] n=1 H=1e4", ps: PlaceSet::rational(&[2]).unwrap(), n: 1, h: int(10_000) },
        Workload { name: "Z[1/6] n=2 H=30", ps: PlaceSet::rational(&[2, 3]).unwrap(), n: 2, h: int(30) },
        Workload {
            name: "Z[i] n=1 H=40",
            ps: PlaceSet::archimedean(FieldDesc::quadratic(-1).unwrap()),
            n: 1,
            h: int(40),
        },
        Workload {
            name: "Z[sqrt3, 1/2] n=1 H=12",
            ps: from_json(r#"{"field": {"kind": "quadratic", "d": 3}, "s_primes": [{"p": 2}]}"#),
            n: 1,
            h: int(12),
        },
    ]
}

/// Monic polynomial workloads, `n` being the degree.
pub fn polynomial_workloads() -> Vec<Workload> {
    vec![
        Workload { name: "Z e=2 H=6", ps: PlaceSet::rational(&[]).unwrap(), n: 2, h: int(6) },
        Workload { name: "Z[1/2] e=2 H=5/2", ps: PlaceSet::rational(&[2]).unwrap(), n: 2, h: parse("5/2").unwrap() },
        Workload { name: "Z e=3 H=3", ps: PlaceSet::rational(&[]).unwrap(), n: 3, h: int(3) },
    ]
}
