use serde::{Deserialize, Serialize};

use super::Complex;

/// Scalar expression tree in the disc variable `lambda`.
///
/// This is the wire format for analytic discs: every component of an
/// interpolant is one of these trees, serialised with a `"node"` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Expr {
    Lambda,
    Const {
        value: Complex,
    },
    Mul {
        args: Vec<Expr>,
    },
    Add {
        args: Vec<Expr>,
    },
    /// `(t - a) / (1 - conj(a) t)` applied to `t = arg`.
    Blaschke {
        a: Complex,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn lambda() -> Expr {
        Expr::Lambda
    }

    pub fn constant(value: Complex) -> Expr {
        Expr::Const { value }
    }

    pub fn zero() -> Expr {
        Expr::constant(Complex::new(0.0, 0.0))
    }

    fn as_const(&self) -> Option<Complex> {
        match self {
            Expr::Const { value } => Some(*value),
            _ => None,
        }
    }

    /// Product with constant folding; a zero factor collapses the product.
    pub fn mul(args: Vec<Expr>) -> Expr {
        let mut k = Complex::new(1.0, 0.0);
        let mut rest = Vec::new();
        for a in args {
            match a.as_const() {
                Some(c) => k *= c,
                None => rest.push(a),
            }
        }
        if k == Complex::new(0.0, 0.0) || rest.is_empty() {
            return Expr::constant(k);
        }
        if k != Complex::new(1.0, 0.0) {
            rest.insert(0, Expr::constant(k));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Expr::Mul { args: rest }
        }
    }

    pub fn add(args: Vec<Expr>) -> Expr {
        let mut k = Complex::new(0.0, 0.0);
        let mut rest = Vec::new();
        for a in args {
            match a.as_const() {
                Some(c) => k += c,
                None => rest.push(a),
            }
        }
        if rest.is_empty() {
            return Expr::constant(k);
        }
        if k != Complex::new(0.0, 0.0) {
            rest.insert(0, Expr::constant(k));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Expr::Add { args: rest }
        }
    }

    pub fn scale(c: Complex, e: Expr) -> Expr {
        Expr::mul(vec![Expr::constant(c), e])
    }

    pub fn blaschke(a: Complex, arg: Expr) -> Expr {
        if a == Complex::new(0.0, 0.0) {
            return arg;
        }
        match arg.as_const() {
            Some(t) => Expr::constant((t - a) / (1.0 - a.conj() * t)),
            None => Expr::Blaschke {
                a,
                arg: Box::new(arg),
            },
        }
    }

    /// `1 / (1 - conj(a) lambda)` written with the available nodes, using
    /// `1 + conj(a) B_a(lambda) = (1 - |a|^2) / (1 - conj(a) lambda)`.
    pub fn inverse_linear(a: Complex) -> Expr {
        if a == Complex::new(0.0, 0.0) {
            return Expr::constant(Complex::new(1.0, 0.0));
        }
        let k = 1.0 / (1.0 - a.norm_sqr());
        Expr::scale(
            Complex::new(k, 0.0),
            Expr::add(vec![
                Expr::constant(Complex::new(1.0, 0.0)),
                Expr::scale(a.conj(), Expr::blaschke(a, Expr::lambda())),
            ]),
        )
    }

    pub fn eval(&self, lambda: Complex) -> Complex {
        match self {
            Expr::Lambda => lambda,
            Expr::Const { value } => *value,
            Expr::Mul { args } => args
                .iter()
                .fold(Complex::new(1.0, 0.0), |acc, e| acc * e.eval(lambda)),
            Expr::Add { args } => args
                .iter()
                .fold(Complex::new(0.0, 0.0), |acc, e| acc + e.eval(lambda)),
            Expr::Blaschke { a, arg } => {
                let t = arg.eval(lambda);
                (t - a) / (1.0 - a.conj() * t)
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Lambda | Expr::Const { .. } => 1,
            Expr::Mul { args } | Expr::Add { args } => {
                1 + args.iter().map(Expr::size).sum::<usize>()
            }
            Expr::Blaschke { arg, .. } => 1 + arg.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn folding() {
        assert_eq!(Expr::mul(vec![Expr::zero(), Expr::lambda()]), Expr::zero());
        assert_eq!(
            Expr::mul(vec![Expr::constant(c(1.0, 0.0)), Expr::lambda()]),
            Expr::lambda()
        );
        assert_eq!(
            Expr::add(vec![Expr::zero(), Expr::lambda()]),
            Expr::lambda()
        );
        assert_eq!(Expr::blaschke(c(0.0, 0.0), Expr::lambda()), Expr::lambda());
    }

    #[test]
    fn inverse_linear_matches_division() {
        let a = c(0.3, -0.4);
        let e = Expr::inverse_linear(a);
        for l in [c(0.0, 0.0), c(0.9, 0.1), c(-0.5, 0.7), c(1.0, 0.0)] {
            let want = 1.0 / (1.0 - a.conj() * l);
            assert!((e.eval(l) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn json_shape() {
        let e = Expr::mul(vec![
            Expr::constant(c(0.5, 0.0)),
            Expr::blaschke(c(0.25, 0.0), Expr::lambda()),
        ]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"node":"mul","args":[{"node":"const","value":[0.5,0.0]},{"node":"blaschke","a":[0.25,0.0],"arg":{"node":"lambda"}}]}"#
        );
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
