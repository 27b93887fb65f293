//! Sample solutions of Goursat's equation `F_12 / F_13 = F_2 / F_3`,
//! i.e. the `l = 1, k = 3` case, for `n = 4` and `n = 5`.

use crate::expr::{parse, Expr};
use crate::reducibility::{compose, RolePartition};
use crate::web::WebSpec;

/// A named composed web together with its generating pieces.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub f: Expr,
    pub g: Expr,
    pub partition: RolePartition,
    pub web: WebSpec,
}

pub const NAMES: [&str; 2] = ["goursat4", "goursat5"];

fn build(name: &'static str, n: usize, f: &str, g: &str, s: &[usize]) -> Preset {
    let f = parse(f).expect("preset f parses");
    let g = parse(g).expect("preset g parses");
    let partition = RolePartition::with_blocks(n, &[1], &[2, 3], s).expect("preset partition");
    let web = compose(&f, &g, &partition).expect("preset composes");
    Preset {
        name,
        f,
        g,
        partition,
        web,
    }
}

/// `z = f(x1, g(x2, x3, x4), x4)` with `f = u1*u2 + u3`, `g = (x2+x3)*x4`.
pub fn goursat4() -> Preset {
    build("goursat4", 4, "u1*u2 + u3", "(x2+x3)*x4", &[4])
}

/// `z = f(x1, g(x2, x3, x4, x5), x4, x5)` with `f = u1*u2 + u3*u4 + u1`,
/// `g = exp(x2) + x3*x4 + x5`.
pub fn goursat5() -> Preset {
    build(
        "goursat5",
        5,
        "u1*u2 + u3*u4 + u1",
        "exp(x2) + x3*x4 + x5",
        &[4, 5],
    )
}

pub fn by_name(name: &str) -> Option<Preset> {
    match name {
        "goursat4" => Some(goursat4()),
        "goursat5" => Some(goursat5()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goursat4_expression() {
        assert_eq!(goursat4().web.function().to_string(), "x1*((x2+x3)*x4)+x4");
    }

    #[test]
    fn goursat5_expression() {
        let p = goursat5();
        assert_eq!(
            p.web.function().to_string(),
            "x1*(exp(x2)+x3*x4+x5)+x4*x5+x1"
        );
        assert_eq!(p.partition.s(), &[4, 5]);
    }

    #[test]
    fn lookup() {
        for name in NAMES {
            assert_eq!(by_name(name).unwrap().name, name);
        }
        assert!(by_name("goursat6").is_none());
    }
}
