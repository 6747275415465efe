use thiserror::Error;

use crate::tast::{Action, Network};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaleError {
    #[error("scale divisor must be positive")]
    ZeroDivisor,
    #[error("constant {constant} in `{automaton}` is not divisible by {divisor}")]
    NotDivisible {
        automaton: String,
        constant: u32,
        divisor: u32,
    },
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Greatest common divisor of every timing constant (1 when there is none).
pub fn constants_gcd(net: &Network) -> u32 {
    match net.constants().into_iter().fold(0, gcd) {
        0 => 1,
        g => g,
    }
}

/// Divides every guard and invariant constant by `divisor`.
pub fn scale_constants(net: &Network, divisor: u32) -> Result<Network, ScaleError> {
    if divisor == 0 {
        return Err(ScaleError::ZeroDivisor);
    }
    let mut out = net.clone();
    for a in &mut out.automata {
        let check = |c: u32| {
            if c.is_multiple_of(divisor) {
                Ok(c / divisor)
            } else {
                Err(ScaleError::NotDivisible {
                    automaton: a.id.clone(),
                    constant: c,
                    divisor,
                })
            }
        };
        let mut edges = a.edges.clone();
        for e in &mut edges {
            if let Action::Guard(c) = e.action {
                e.action = Action::Guard(check(c)?);
            }
        }
        let mut locations = a.locations.clone();
        for l in &mut locations {
            if let Some(c) = l.invariant {
                l.invariant = Some(check(c)?);
            }
        }
        a.locations = locations;
        a.edges = edges;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elaborate::elaborate;
    use crate::spec::load;

    fn ex1() -> Network {
        elaborate(&load(include_str!("../../../../models/ex1.mirela")).unwrap()).unwrap()
    }

    #[test]
    fn example_one_gcd_is_25() {
        assert_eq!(constants_gcd(&ex1()), 25);
    }

    #[test]
    fn scaled_sensor() {
        let net = scale_constants(&ex1(), 25).unwrap();
        let s1 = net.automaton("S1").unwrap();
        assert_eq!(s1.locations[0].invariant, Some(3));
        assert_eq!(s1.locations[1].invariant, Some(4));
        assert_eq!(s1.edges[0].action, Action::Guard(2));
        assert_eq!(s1.edges[1].action, Action::Guard(3));
        assert_eq!(s1.clock_ceiling(), 5);
        assert_eq!(ex1().automaton("S1").unwrap().clock_ceiling(), 101);
    }

    #[test]
    fn indivisible_constant_is_named() {
        let err = scale_constants(&ex1(), 7).unwrap_err();
        assert_eq!(
            err,
            ScaleError::NotDivisible {
                automaton: "S1".into(),
                constant: 50,
                divisor: 7
            }
        );
        assert_eq!(scale_constants(&ex1(), 0).unwrap_err(), ScaleError::ZeroDivisor);
    }
}
