//! Reference webs: compositions `f(x_P, g(x_A, x_S), x_S)` with known
//! reducible partitions, and generic webs with none at their headline
//! partition.

use webtorsion::expr::parse;
use webtorsion::presets;
use webtorsion::reducibility::{compose, RolePartition};
use webtorsion::web::WebSpec;

#[derive(Debug, Clone)]
pub enum Kind {
    /// Built by composition on `partition`. `whole_web` marks the stronger
    /// form where `g` does not depend on the S block.
    Composed {
        partition: RolePartition,
        whole_web: bool,
    },
    /// Not reducible on `partition`.
    Generic { partition: RolePartition },
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub web: WebSpec,
    pub kind: Kind,
}

impl Entry {
    pub fn partition(&self) -> &RolePartition {
        match &self.kind {
            Kind::Composed { partition, .. } | Kind::Generic { partition } => partition,
        }
    }

    pub fn is_composed(&self) -> bool {
        matches!(self.kind, Kind::Composed { .. })
    }
}

fn composed(
    name: &str,
    f: &str,
    g: &str,
    n: usize,
    p: &[usize],
    a: &[usize],
    whole_web: bool,
) -> Entry {
    let partition = RolePartition::new(n, p, a).unwrap();
    let web = compose(&parse(f).unwrap(), &parse(g).unwrap(), &partition).unwrap();
    Entry {
        name: name.to_string(),
        web,
        kind: Kind::Composed {
            partition,
            whole_web,
        },
    }
}

fn generic(name: &str, text: &str, n: usize, p: &[usize], a: &[usize]) -> Entry {
    Entry {
        name: name.to_string(),
        web: WebSpec::new(n, parse(text).unwrap()).unwrap(),
        kind: Kind::Generic {
            partition: RolePartition::new(n, p, a).unwrap(),
        },
    }
}

fn preset(name: &str) -> Entry {
    let p = presets::by_name(name).unwrap();
    Entry {
        name: name.to_string(),
        web: p.web,
        kind: Kind::Composed {
            partition: p.partition,
            whole_web: false,
        },
    }
}

/// Seven composed webs (including both Goursat presets) and six generic
/// ones.
pub fn corpus() -> Vec<Entry> {
    vec![
        preset("goursat4"),
        preset("goursat5"),
        composed("product4", "u1*u2", "(x2+x3)*x4", 4, &[1], &[2, 3], false),
        composed("skew4", "u1*u2 + u3", "x2 + x3*x4", 4, &[1], &[2, 3], false),
        composed(
            "exp3",
            "exp(u1)*u2 + u1",
            "x2*x3 + x2 + x3",
            3,
            &[1],
            &[2, 3],
            true,
        ),
        composed(
            "twoP5",
            "u1*u3 + u2*u3 + u1*u2",
            "x3 + x4*x5 + x3*x4",
            5,
            &[1, 2],
            &[3, 4, 5],
            true,
        ),
        composed(
            "whole4",
            "u1*u2 + u1*u3 + u3",
            "x2 + x3 + x2*x3",
            4,
            &[1],
            &[2, 3],
            true,
        ),
        generic(
            "expsum4",
            "exp(x1)+exp(x2)+exp(x3)+exp(x4)+x1*x2*x3*x4",
            4,
            &[1],
            &[2, 3],
        ),
        generic("bilinear4", "x1*x2 + x3 + x4", 4, &[1], &[2, 3]),
        generic("cubic3", "x1 + x2 + x3 + x1*x2*x3", 3, &[1], &[2, 3]),
        generic("trig3", "sin(x1*x2) + x3 + x1*x3^2 + x2", 3, &[1], &[2, 3]),
        generic(
            "mixed5",
            "x1*x2*x3 + x3*x4*x5 + exp(x1+x5) + x2 + x4",
            5,
            &[1],
            &[2, 3],
        ),
        generic(
            "cyclic4",
            "x1^2*x2 + x2^2*x3 + x3^2*x4 + x4^2*x1 + x1 + x2 + x3 + x4",
            4,
            &[1],
            &[2, 3],
        ),
    ]
}
