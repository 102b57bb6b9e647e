#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sgmc::algebra::{Polynomial, RationalFunction, Var, Q};
use sgmc::chainfile::ChainFile;
use sgmc::loopkleene::{concat, letter, star, union, Kleene};
use sgmc::markov::{GeneratorSpec, MarkovChainSpec, Prob};
use sgmc::semigroup::Transformation;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load(name: &str) -> MarkovChainSpec {
    ChainFile::load(&data_path(name)).unwrap().to_spec().unwrap()
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn x(v: Var) -> Polynomial {
    Polynomial::var(v)
}

pub fn c(n: i64, d: i64) -> Polynomial {
    Polynomial::constant(q(n, d))
}

pub fn rf(num: Polynomial, den: Polynomial) -> RationalFunction {
    RationalFunction::new(num, den).unwrap()
}

pub fn poly(p: Polynomial) -> RationalFunction {
    RationalFunction::from_polynomial(p)
}

/// A chain with symbolic probabilities on `actions.len()` generators.
pub fn symbolic_chain(states: usize, actions: &[Vec<usize>]) -> MarkovChainSpec {
    let generators = actions
        .iter()
        .enumerate()
        .map(|(i, a)| GeneratorSpec {
            label: ((b'a' + i as u8) as char).to_string(),
            action: Transformation::new(a.clone()).unwrap(),
            prob: Prob::Symbolic,
        })
        .collect();
    MarkovChainSpec::new((0..states).map(|s| s.to_string()).collect(), generators).unwrap()
}

/// A random chain with 2 to 4 states and 2 to 3 generators.
pub fn random_chain(seed: u64) -> MarkovChainSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let k = rng.gen_range(2..=3);
    let actions: Vec<Vec<usize>> = (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    symbolic_chain(n, &actions)
}

/// Parses `a{x,y}*(bc)*□` style expressions: juxtaposition is
/// concatenation, `{…,…}` a union, `(…)` grouping, `*` or `⋆` a star.
/// Every other character is a letter looked up in `labels`.
pub fn parse_kleene(text: &str, labels: &[&str]) -> Kleene {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let e = parse_seq(&chars, &mut pos, labels);
    assert_eq!(pos, chars.len(), "trailing input in {text:?}");
    e
}

fn parse_seq(chars: &[char], pos: &mut usize, labels: &[&str]) -> Kleene {
    let mut parts = Vec::new();
    while *pos < chars.len() && !matches!(chars[*pos], ')' | '}' | ',') {
        let mut atom = match chars[*pos] {
            '(' => {
                *pos += 1;
                let e = parse_seq(chars, pos, labels);
                assert_eq!(chars[*pos], ')');
                *pos += 1;
                e
            }
            '{' => {
                *pos += 1;
                let mut alts = vec![parse_seq(chars, pos, labels)];
                while chars[*pos] == ',' {
                    *pos += 1;
                    alts.push(parse_seq(chars, pos, labels));
                }
                assert_eq!(chars[*pos], '}');
                *pos += 1;
                union(alts)
            }
            ch => {
                *pos += 1;
                let s = ch.to_string();
                let i = labels
                    .iter()
                    .position(|l| *l == s)
                    .unwrap_or_else(|| panic!("unknown letter {s:?}"));
                letter(i)
            }
        };
        while *pos < chars.len() && matches!(chars[*pos], '*' | '⋆') {
            *pos += 1;
            atom = star(atom);
        }
        parts.push(atom);
    }
    concat(parts)
}
