//! Finite transformation semigroups with an adjoined identity `𝟙` and an
//! optional adjoined zero `□`.
//!
//! Composition follows `(s·t)(ω) = s(t(ω))`: the right factor acts first.
//! With this convention the word `31` of the two-state example evaluates to
//! the constant map onto state 2, matching the right Cayley graph drawn for
//! that chain.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

pub type ElemId = usize;

/// Default bound on `|S|`.
pub const DEFAULT_MAX_ELEMENTS: usize = 100_000;

/// Label used for the adjoined zero generator.
pub const BOX_LABEL: &str = "□";

/// Name of the adjoined identity.
pub const IDENTITY_NAME: &str = "𝟙";

/// A total map on `{0, …, n−1}` given by its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation(Vec<usize>);

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidTransformation("empty state space".into()));
        }
        if let Some((i, &img)) = images.iter().enumerate().find(|(_, &img)| img >= n) {
            return Err(Error::InvalidTransformation(format!(
                "image {img} of state {i} is out of range 0..{n}"
            )));
        }
        Ok(Transformation(images))
    }

    pub fn identity(n: usize) -> Self {
        Transformation((0..n).collect())
    }

    pub fn constant(n: usize, c: usize) -> Self {
        Transformation(vec![c; n])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, state: usize) -> usize {
        self.0[state]
    }

    /// `self ∘ right`: apply `right` first.
    pub fn compose(&self, right: &Transformation) -> Transformation {
        Transformation(right.0.iter().map(|&w| self.0[w]).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.iter().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Identity,
    Map(Transformation),
    Zero,
}

/// A finite semigroup `S` generated by labelled transformations, stored with
/// `𝟙` (and possibly `□`) adjoined.
///
/// Element ids: the generated elements come first in breadth-first order of
/// their shortest words, then `𝟙`, then `□` when present.
#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    degree: usize,
    elements: Vec<Element>,
    names: Vec<String>,
    labels: Vec<String>,
    generators: Vec<ElemId>,
    index: HashMap<Transformation, ElemId>,
    right: Vec<Vec<ElemId>>,
    left: Vec<Vec<ElemId>>,
    identity: ElemId,
    zero: Option<ElemId>,
}

/// The minimal two-sided ideal `K(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealInfo {
    pub members: BTreeSet<ElemId>,
    pub is_left_zero: bool,
}

fn join_word(labels: &[String], word: &[usize]) -> String {
    let sep = if labels.iter().all(|l| l.chars().count() == 1) {
        ""
    } else {
        "·"
    };
    word.iter()
        .map(|&a| labels[a].as_str())
        .collect::<Vec<_>>()
        .join(sep)
}

impl FiniteSemigroup {
    /// Closes the generators under composition.
    pub fn generate(generators: &[(String, Transformation)], cap: usize) -> Result<Self> {
        let Some((_, first)) = generators.first() else {
            return Err(Error::Input("at least one generator is required".into()));
        };
        let degree = first.degree();
        let mut labels = Vec::with_capacity(generators.len());
        for (label, t) in generators {
            if t.degree() != degree {
                return Err(Error::InvalidTransformation(format!(
                    "generator {label} acts on {} states, expected {degree}",
                    t.degree()
                )));
            }
            if labels.contains(label) {
                return Err(Error::Input(format!("duplicate generator label {label:?}")));
            }
            labels.push(label.clone());
        }

        let mut maps: Vec<Transformation> = Vec::new();
        let mut words: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Transformation, ElemId> = HashMap::new();
        let mut gen_ids = Vec::with_capacity(generators.len());
        for (a, (_, t)) in generators.iter().enumerate() {
            let id = *index.entry(t.clone()).or_insert_with(|| {
                maps.push(t.clone());
                words.push(vec![a]);
                maps.len() - 1
            });
            gen_ids.push(id);
        }
        let mut right_maps: Vec<Vec<ElemId>> = Vec::new();
        let mut i = 0;
        while i < maps.len() {
            let mut row = Vec::with_capacity(generators.len());
            for (a, (_, t)) in generators.iter().enumerate() {
                let prod = maps[i].compose(t);
                let id = match index.get(&prod) {
                    Some(&id) => id,
                    None => {
                        if maps.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "semigroup size",
                                cap,
                            });
                        }
                        let mut w = words[i].clone();
                        w.push(a);
                        maps.push(prod.clone());
                        words.push(w);
                        index.insert(prod, maps.len() - 1);
                        maps.len() - 1
                    }
                };
                row.push(id);
            }
            right_maps.push(row);
            i += 1;
        }

        let n = maps.len();
        let identity = n;
        let mut left = Vec::with_capacity(n + 1);
        for m in &maps {
            left.push(
                generators
                    .iter()
                    .map(|(_, t)| index[&t.compose(m)])
                    .collect::<Vec<_>>(),
            );
        }
        left.push(gen_ids.clone());
        let mut right = right_maps;
        right.push(gen_ids.clone());

        let mut names: Vec<String> = words.iter().map(|w| join_word(&labels, w)).collect();
        names.push(IDENTITY_NAME.to_string());
        let mut elements: Vec<Element> = maps.into_iter().map(Element::Map).collect();
        elements.push(Element::Identity);

        Ok(FiniteSemigroup {
            degree,
            elements,
            names,
            labels,
            generators: gen_ids,
            index,
            right,
            left,
            identity,
            zero: None,
        })
    }

    /// Adjoins a zero `□` with `w□ = □w = □` and adds it as a generator
    /// labelled [`BOX_LABEL`].
    pub fn adjoin_zero(&self) -> Result<Self> {
        if self.zero.is_some() {
            return Ok(self.clone());
        }
        if self.labels.iter().any(|l| l == BOX_LABEL) {
            return Err(Error::Input(format!("label {BOX_LABEL} is reserved")));
        }
        let mut s = self.clone();
        let z = s.elements.len();
        s.elements.push(Element::Zero);
        s.names.push(BOX_LABEL.to_string());
        s.labels.push(BOX_LABEL.to_string());
        s.generators.push(z);
        for row in s.right.iter_mut().chain(s.left.iter_mut()) {
            row.push(z);
        }
        s.right.push(vec![z; s.labels.len()]);
        s.left.push(vec![z; s.labels.len()]);
        s.zero = Some(z);
        Ok(s)
    }

    /// Number of states acted on.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of elements including the adjoined ones.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements of `S` (or `S ∪ {□}`), i.e. everything except `𝟙`.
    pub fn non_identity(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.len()).filter(move |&e| e != self.identity)
    }

    pub fn element(&self, e: ElemId) -> &Element {
        &self.elements[e]
    }

    pub fn transformation(&self, e: ElemId) -> Option<&Transformation> {
        match &self.elements[e] {
            Element::Map(t) => Some(t),
            _ => None,
        }
    }

    pub fn lookup(&self, t: &Transformation) -> Option<ElemId> {
        self.index.get(t).copied()
    }

    /// Name of an element: its shortest word in length-lex order.
    pub fn name(&self, e: ElemId) -> &str {
        &self.names[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn generator(&self, a: usize) -> ElemId {
        self.generators[a]
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn identity(&self) -> ElemId {
        self.identity
    }

    pub fn zero(&self) -> Option<ElemId> {
        self.zero
    }

    /// `s·a` for a generator index `a`.
    pub fn right_mul(&self, s: ElemId, a: usize) -> ElemId {
        self.right[s][a]
    }

    /// `a·s` for a generator index `a`.
    pub fn left_mul(&self, a: usize, s: ElemId) -> ElemId {
        self.left[s][a]
    }

    pub fn mul(&self, s: ElemId, t: ElemId) -> ElemId {
        match (&self.elements[s], &self.elements[t]) {
            (Element::Zero, _) | (_, Element::Zero) => self.zero.expect("zero adjoined"),
            (Element::Identity, _) => t,
            (_, Element::Identity) => s,
            (Element::Map(x), Element::Map(y)) => self.index[&x.compose(y)],
        }
    }

    /// Evaluates a word of generator indices in `S¹`.
    pub fn eval_word(&self, word: &[usize]) -> ElemId {
        word.iter()
            .fold(self.identity, |s, &a| self.right_mul(s, a))
    }

    pub fn word_name(&self, word: &[usize]) -> String {
        join_word(&self.labels, word)
    }

    /// The principal two-sided ideal `S¹ s S¹`.
    pub fn principal_ideal(&self, s: ElemId) -> BTreeSet<ElemId> {
        let mut seen = BTreeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for a in 0..self.generator_count() {
                for y in [self.right_mul(x, a), self.left_mul(a, x)] {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    /// `K(S)`: the ideal generated by an element of minimal rank, which for a
    /// transformation semigroup is exactly the set of minimal-rank elements.
    pub fn minimal_ideal(&self) -> IdealInfo {
        let members = match self.zero {
            Some(z) => BTreeSet::from([z]),
            None => {
                let z = (0..self.len())
                    .filter_map(|e| self.transformation(e).map(|t| (t.rank(), e)))
                    .min()
                    .map(|(_, e)| e)
                    .expect("semigroup has at least one generated element");
                self.principal_ideal(z)
            }
        };
        let is_left_zero = members
            .iter()
            .all(|&x| members.iter().all(|&y| self.mul(x, y) == x));
        IdealInfo {
            members,
            is_left_zero,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    pub fn d2_generators() -> Vec<(String, Transformation)> {
        // states (1, a, b, ab)
        vec![
            ("a".into(), t(&[1, 0, 3, 2])),
            ("b".into(), t(&[2, 3, 0, 1])),
        ]
    }

    pub fn example_generators() -> Vec<(String, Transformation)> {
        vec![
            ("1".into(), t(&[0, 0])),
            ("2".into(), t(&[1, 1])),
            ("3".into(), t(&[1, 0])),
        ]
    }

    #[test]
    fn two_state_example() {
        let s = FiniteSemigroup::generate(&example_generators(), DEFAULT_MAX_ELEMENTS).unwrap();
        assert_eq!(s.len(), 5);
        let (t1, t2, t3) = (s.generator(0), s.generator(1), s.generator(2));
        assert_eq!(s.mul(t3, t1), t2);
        assert_eq!(s.mul(t3, t2), t1);
        let id_map = s.mul(t3, t3);
        assert_eq!(s.transformation(id_map), Some(&Transformation::identity(2)));
        assert_ne!(id_map, s.identity());
        assert_eq!(s.name(id_map), "33");
        let k = s.minimal_ideal();
        assert_eq!(k.members, BTreeSet::from([t1, t2]));
        assert!(k.is_left_zero);
    }

    #[test]
    fn identity_on_one_state() {
        let s = FiniteSemigroup::generate(&[("a".into(), t(&[0]))], 10).unwrap();
        assert_eq!(s.len(), 2);
        let k = s.minimal_ideal();
        assert_eq!(k.members.len(), 1);
        assert!(k.is_left_zero);
    }

    #[test]
    fn dihedral_group() {
        let s = FiniteSemigroup::generate(&d2_generators(), DEFAULT_MAX_ELEMENTS).unwrap();
        assert_eq!(s.len() - 1, 4);
        let k = s.minimal_ideal();
        assert_eq!(k.members.len(), 4);
        assert!(!k.is_left_zero);
        assert_eq!(s.eval_word(&[0, 0, 1]), s.generator(1));
    }

    #[test]
    fn adjoined_zero() {
        let s = FiniteSemigroup::generate(&d2_generators(), DEFAULT_MAX_ELEMENTS).unwrap();
        let z = s.adjoin_zero().unwrap();
        let zero = z.zero().unwrap();
        for e in 0..z.len() {
            assert_eq!(z.mul(e, zero), zero);
            assert_eq!(z.mul(zero, e), zero);
        }
        let k = z.minimal_ideal();
        assert_eq!(k.members, BTreeSet::from([zero]));
        assert!(k.is_left_zero);
        assert_eq!(z.label(2), BOX_LABEL);

        let triv = FiniteSemigroup::generate(&[("e".into(), t(&[0]))], 10).unwrap();
        let tz = triv.adjoin_zero().unwrap();
        assert_eq!(tz.mul(0, tz.zero().unwrap()), tz.zero().unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        // full transformation monoid on 3 points has 27 elements
        let gens = vec![
            ("a".into(), t(&[1, 2, 0])),
            ("b".into(), t(&[1, 0, 2])),
            ("c".into(), t(&[0, 0, 2])),
        ];
        let s = FiniteSemigroup::generate(&gens, 100).unwrap();
        assert_eq!(s.len() - 1, 27);
        assert!(matches!(
            FiniteSemigroup::generate(&gens, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Transformation::new(vec![0, 2]).is_err());
        let gens = vec![("a".into(), t(&[0, 1])), ("b".into(), t(&[0]))];
        assert!(FiniteSemigroup::generate(&gens, 10).is_err());
    }
}
