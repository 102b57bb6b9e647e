use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{RationalFunction, Var};
use crate::error::{Error, Result};

use super::loopgraph::LoopGraph;

pub type Kleene = Arc<KleeneExpr>;

/// A placeholder for the `index`-th loop at spine vertex `vertex`;
/// `ordinal` numbers placeholders in order of appearance, from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LoopRef {
    pub vertex: usize,
    pub index: usize,
    pub ordinal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KleeneExpr {
    Epsilon,
    Letter(usize),
    Concat(Vec<Kleene>),
    Union(Vec<Kleene>),
    Star(Kleene),
    Loop(LoopRef),
}

pub fn epsilon() -> Kleene {
    Arc::new(KleeneExpr::Epsilon)
}

pub fn letter(a: usize) -> Kleene {
    Arc::new(KleeneExpr::Letter(a))
}

/// Concatenation with nested concatenations flattened and `ε` dropped.
pub fn concat(parts: Vec<Kleene>) -> Kleene {
    let mut flat = Vec::with_capacity(parts.len());
    for p in parts {
        match &*p {
            KleeneExpr::Epsilon => {}
            KleeneExpr::Concat(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(p),
        }
    }
    match flat.len() {
        0 => epsilon(),
        1 => flat.pop().expect("one element"),
        _ => Arc::new(KleeneExpr::Concat(flat)),
    }
}

/// Union with nested unions flattened; a singleton union is its element.
pub fn union(parts: Vec<Kleene>) -> Kleene {
    let mut flat = Vec::with_capacity(parts.len());
    for p in parts {
        match &*p {
            KleeneExpr::Union(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(p),
        }
    }
    match flat.len() {
        0 => panic!("empty union"),
        1 => flat.pop().expect("one element"),
        _ => Arc::new(KleeneExpr::Union(flat)),
    }
}

pub fn star(e: Kleene) -> Kleene {
    match &*e {
        KleeneExpr::Epsilon => e,
        _ => Arc::new(KleeneExpr::Star(e)),
    }
}

impl KleeneExpr {
    /// Renders with `*` for the star, `{e1,e2}` for unions and juxtaposition
    /// for concatenation. Labels longer than one character are separated by
    /// `·`. Fails with `CapExceeded` once the text exceeds `cap` bytes.
    pub fn render(&self, labels: &[String], cap: usize) -> Result<String> {
        let sep = if labels.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            "·"
        };
        let mut out = String::new();
        self.render_into(labels, sep, &mut out, cap)?;
        Ok(out)
    }

    fn render_into(&self, labels: &[String], sep: &str, out: &mut String, cap: usize) -> Result<()> {
        if out.len() > cap {
            return Err(Error::CapExceeded {
                what: "rendered expression length",
                cap,
            });
        }
        match self {
            KleeneExpr::Epsilon => out.push('ε'),
            KleeneExpr::Letter(a) => out.push_str(&labels[*a]),
            KleeneExpr::Loop(r) => {
                out.push('ℓ');
                out.push_str(&r.ordinal.to_string());
            }
            KleeneExpr::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    p.render_into(labels, sep, out, cap)?;
                }
            }
            KleeneExpr::Union(parts) => {
                out.push('{');
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    p.render_into(labels, sep, out, cap)?;
                }
                out.push('}');
            }
            KleeneExpr::Star(inner) => {
                let bare = matches!(
                    &**inner,
                    KleeneExpr::Letter(_) | KleeneExpr::Loop(_) | KleeneExpr::Union(_)
                );
                if !bare {
                    out.push('(');
                }
                inner.render_into(labels, sep, out, cap)?;
                if !bare {
                    out.push(')');
                }
                out.push('*');
            }
        }
        Ok(())
    }

    /// Number of AST nodes counting shared subtrees once per occurrence,
    /// saturating.
    pub fn tree_size(&self) -> u64 {
        match self {
            KleeneExpr::Epsilon | KleeneExpr::Letter(_) | KleeneExpr::Loop(_) => 1,
            KleeneExpr::Star(e) => e.tree_size().saturating_add(1),
            KleeneExpr::Concat(ps) | KleeneExpr::Union(ps) => ps
                .iter()
                .fold(1u64, |acc, p| acc.saturating_add(p.tree_size())),
        }
    }

    pub fn has_placeholder(&self) -> bool {
        match self {
            KleeneExpr::Loop(_) => true,
            KleeneExpr::Epsilon | KleeneExpr::Letter(_) => false,
            KleeneExpr::Star(e) => e.has_placeholder(),
            KleeneExpr::Concat(ps) | KleeneExpr::Union(ps) => ps.iter().any(|p| p.has_placeholder()),
        }
    }

    pub fn has_union(&self) -> bool {
        match self {
            KleeneExpr::Union(_) => true,
            KleeneExpr::Epsilon | KleeneExpr::Letter(_) | KleeneExpr::Loop(_) => false,
            KleeneExpr::Star(e) => e.has_union(),
            KleeneExpr::Concat(ps) => ps.iter().any(|p| p.has_union()),
        }
    }
}

/// Reads the spine of `lg`, writing each edge label followed by the star of
/// the union of the loops at the vertex it enters.
pub fn algorithm1(lg: &LoopGraph) -> Kleene {
    let mut ordinal = 0;
    let mut parts = Vec::new();
    let mut loops_at = |i: usize, parts: &mut Vec<Kleene>| {
        if lg.loops[i].is_empty() {
            return;
        }
        let refs = (0..lg.loops[i].len())
            .map(|j| {
                ordinal += 1;
                Arc::new(KleeneExpr::Loop(LoopRef {
                    vertex: i,
                    index: j,
                    ordinal,
                }))
            })
            .collect();
        parts.push(star(union(refs)));
    };
    loops_at(0, &mut parts);
    for i in 1..=lg.len() {
        parts.push(letter(lg.labels[i - 1]));
        loops_at(i, &mut parts);
    }
    concat(parts)
}

/// Replaces every loop placeholder in `e` (produced by [`algorithm1`] on
/// `lg`) by the expression of the loop's body followed by its closing label,
/// recursively, until only letters, concatenation, unions and stars remain.
pub fn algorithm2(e: &Kleene, lg: &LoopGraph) -> Result<Kleene> {
    let mut memo = HashMap::new();
    substitute(e, lg, &mut memo)
}

type LoopMemo = HashMap<usize, Kleene>;

fn loop_expr(l: &super::loopgraph::Loop, memo: &mut LoopMemo) -> Result<Kleene> {
    if let Some(k) = memo.get(&l.edge) {
        return Ok(k.clone());
    }
    let inner = algorithm1(&l.body);
    let body = substitute(&inner, &l.body, memo)?;
    let k = concat(vec![body, letter(l.closing_label)]);
    memo.insert(l.edge, k.clone());
    Ok(k)
}

fn substitute(e: &Kleene, lg: &LoopGraph, memo: &mut LoopMemo) -> Result<Kleene> {
    Ok(match &**e {
        KleeneExpr::Epsilon | KleeneExpr::Letter(_) => e.clone(),
        KleeneExpr::Loop(r) => {
            let l = lg
                .loops
                .get(r.vertex)
                .and_then(|ls| ls.get(r.index))
                .ok_or(Error::UnresolvedPlaceholder)?;
            loop_expr(l, memo)?
        }
        KleeneExpr::Star(inner) => star(substitute(inner, lg, memo)?),
        KleeneExpr::Concat(ps) => concat(
            ps.iter()
                .map(|p| substitute(p, lg, memo))
                .collect::<Result<_>>()?,
        ),
        KleeneExpr::Union(ps) => union(
            ps.iter()
                .map(|p| substitute(p, lg, memo))
                .collect::<Result<_>>()?,
        ),
    })
}

/// The Kleene expression of all paths of a loop graph.
pub fn loop_graph_expression(lg: &LoopGraph) -> Result<Kleene> {
    algorithm2(&algorithm1(lg), lg)
}

/// Removes unions under stars by folding
/// `{e₁,…,e_n}* = ({e₁,…,e_{n−1}}* e_n)* {e₁,…,e_{n−1}}*`.
pub fn zimin_unionless(e: &Kleene) -> Kleene {
    let mut memo: HashMap<*const KleeneExpr, Kleene> = HashMap::new();
    zimin_rec(e, &mut memo)
}

fn zimin_rec(e: &Kleene, memo: &mut HashMap<*const KleeneExpr, Kleene>) -> Kleene {
    let key = Arc::as_ptr(e);
    if let Some(k) = memo.get(&key) {
        return k.clone();
    }
    let out = match &**e {
        KleeneExpr::Epsilon | KleeneExpr::Letter(_) | KleeneExpr::Loop(_) => e.clone(),
        KleeneExpr::Concat(ps) => concat(ps.iter().map(|p| zimin_rec(p, memo)).collect()),
        KleeneExpr::Union(ps) => union(ps.iter().map(|p| zimin_rec(p, memo)).collect()),
        KleeneExpr::Star(inner) => match &**inner {
            KleeneExpr::Union(ps) => {
                let parts: Vec<Kleene> = ps.iter().map(|p| zimin_rec(p, memo)).collect();
                fold_star(&parts)
            }
            _ => star(zimin_rec(inner, memo)),
        },
    };
    memo.insert(key, out.clone());
    out
}

fn fold_star(parts: &[Kleene]) -> Kleene {
    match parts {
        [] => epsilon(),
        [single] => star(single.clone()),
        [init @ .., last] => {
            let head = fold_star(init);
            concat(vec![star(concat(vec![head.clone(), last.clone()])), head])
        }
    }
}

/// Maps letters to variables, concatenation to products, unions to sums and
/// stars to geometric series.
pub fn kleene_to_rf(e: &Kleene, vars: &[Var]) -> Result<RationalFunction> {
    let mut memo: HashMap<*const KleeneExpr, RationalFunction> = HashMap::new();
    to_rf_rec(e, vars, &mut memo)
}

/// Builds expressions and generating functions for many loop graphs of the
/// same source graph, sharing loop expressions (keyed by closing edge) and
/// the functions of shared subexpressions.
pub struct ExpressionCache {
    vars: Vec<Var>,
    loops: LoopMemo,
    rf: HashMap<*const KleeneExpr, RationalFunction>,
    // keeps every memoised node alive so its address stays unique
    keep: Vec<Kleene>,
}

impl ExpressionCache {
    pub fn new(vars: Vec<Var>) -> Self {
        ExpressionCache {
            vars,
            loops: HashMap::new(),
            rf: HashMap::new(),
            keep: Vec::new(),
        }
    }

    /// The expression of `lg`; loop graphs passed here must all come from
    /// the same [`super::Pict`].
    pub fn expression(&mut self, lg: &LoopGraph) -> Result<Kleene> {
        substitute(&algorithm1(lg), lg, &mut self.loops)
    }

    pub fn rational_function(&mut self, e: &Kleene) -> Result<RationalFunction> {
        self.keep.push(e.clone());
        to_rf_rec(e, &self.vars, &mut self.rf)
    }
}

fn to_rf_rec(
    e: &Kleene,
    vars: &[Var],
    memo: &mut HashMap<*const KleeneExpr, RationalFunction>,
) -> Result<RationalFunction> {
    let key = Arc::as_ptr(e);
    if let Some(r) = memo.get(&key) {
        return Ok(r.clone());
    }
    let r = match &**e {
        KleeneExpr::Epsilon => RationalFunction::one(),
        KleeneExpr::Letter(a) => RationalFunction::var(vars[*a]),
        KleeneExpr::Loop(_) => return Err(Error::UnresolvedPlaceholder),
        KleeneExpr::Concat(ps) => {
            let mut acc = RationalFunction::one();
            for p in ps {
                acc = &acc * &to_rf_rec(p, vars, memo)?;
            }
            acc
        }
        KleeneExpr::Union(ps) => {
            let mut acc = RationalFunction::zero();
            for p in ps {
                acc = &acc + &to_rf_rec(p, vars, memo)?;
            }
            acc
        }
        KleeneExpr::Star(inner) => {
            let f = to_rf_rec(inner, vars, memo)?;
            let num0 = f.numerator().constant_term();
            let den0 = f.denominator().constant_term();
            if !num0.is_zero() || den0.is_zero() {
                return Err(Error::StarOfUnit);
            }
            (&RationalFunction::one() - &f).recip()?
        }
    };
    memo.insert(key, r.clone());
    Ok(r)
}


/// Words of length at most `maxlen` in the language of `e`, each with its
/// number of derivations.
pub fn kleene_multiset(e: &Kleene, maxlen: usize) -> Result<BTreeMap<Vec<usize>, u64>> {
    let mut memo = HashMap::new();
    let mut min_memo = HashMap::new();
    let lang = lang_rec(e, maxlen, &mut memo, &mut min_memo)?;
    Ok(lang.iter().flat_map(|b| b.iter().map(|(w, c)| (w.clone(), *c))).collect())
}

/// Words bucketed by length.
type Lang = Vec<HashMap<Vec<usize>, u64>>;

fn lang_unit(maxlen: usize) -> Lang {
    let mut l = vec![HashMap::new(); maxlen + 1];
    l[0].insert(Vec::new(), 1);
    l
}

fn concat_lang(x: &Lang, y: &Lang, maxlen: usize) -> Lang {
    let mut out: Lang = vec![HashMap::new(); maxlen + 1];
    for (i, bx) in x.iter().enumerate().take(maxlen + 1) {
        for (j, by) in y.iter().enumerate().take(maxlen + 1 - i) {
            let slot = &mut out[i + j];
            for (u, cu) in bx {
                for (v, cv) in by {
                    let mut w = Vec::with_capacity(i + j);
                    w.extend_from_slice(u);
                    w.extend_from_slice(v);
                    *slot.entry(w).or_insert(0) += cu * cv;
                }
            }
        }
    }
    out
}

/// Length of the shortest word of `e`.
fn min_len(e: &Kleene, memo: &mut HashMap<*const KleeneExpr, usize>) -> usize {
    let key = Arc::as_ptr(e);
    if let Some(&m) = memo.get(&key) {
        return m;
    }
    let m = match &**e {
        KleeneExpr::Epsilon | KleeneExpr::Star(_) => 0,
        KleeneExpr::Letter(_) | KleeneExpr::Loop(_) => 1,
        KleeneExpr::Concat(ps) => ps.iter().map(|p| min_len(p, memo)).sum(),
        KleeneExpr::Union(ps) => ps.iter().map(|p| min_len(p, memo)).min().unwrap_or(0),
    };
    memo.insert(key, m);
    m
}

type LangMemo = HashMap<(*const KleeneExpr, usize), Arc<Lang>>;

fn lang_rec(
    e: &Kleene,
    maxlen: usize,
    memo: &mut LangMemo,
    min_memo: &mut HashMap<*const KleeneExpr, usize>,
) -> Result<Arc<Lang>> {
    let key = (Arc::as_ptr(e), maxlen);
    if let Some(l) = memo.get(&key) {
        return Ok(l.clone());
    }
    let l: Lang = match &**e {
        KleeneExpr::Epsilon => lang_unit(maxlen),
        KleeneExpr::Letter(a) => {
            let mut l = vec![HashMap::new(); maxlen + 1];
            if maxlen >= 1 {
                l[1].insert(vec![*a], 1);
            }
            l
        }
        KleeneExpr::Loop(_) => return Err(Error::UnresolvedPlaceholder),
        KleeneExpr::Concat(ps) => {
            let mins: Vec<usize> = ps.iter().map(|p| min_len(p, min_memo)).collect();
            let total: usize = mins.iter().sum();
            if total > maxlen {
                vec![HashMap::new(); maxlen + 1]
            } else {
                let mut acc = lang_unit(maxlen);
                for (p, m) in ps.iter().zip(&mins) {
                    // the other parts need at least `total - m` letters
                    let budget = maxlen - (total - m);
                    let part = lang_rec(p, budget, memo, min_memo)?;
                    acc = concat_lang(&acc, &part, maxlen);
                }
                acc
            }
        }
        KleeneExpr::Union(ps) => {
            let mut acc: Lang = vec![HashMap::new(); maxlen + 1];
            for p in ps {
                for (slot, bucket) in acc.iter_mut().zip(lang_rec(p, maxlen, memo, min_memo)?.iter()) {
                    for (w, c) in bucket {
                        *slot.entry(w.clone()).or_insert(0) += c;
                    }
                }
            }
            acc
        }
        KleeneExpr::Star(inner) => {
            let f = lang_rec(inner, maxlen, memo, min_memo)?;
            if !f[0].is_empty() {
                return Err(Error::StarOfUnit);
            }
            let mut acc = lang_unit(maxlen);
            let mut power = acc.clone();
            while power.iter().any(|b| !b.is_empty()) {
                power = concat_lang(&power, &f, maxlen);
                for (slot, bucket) in acc.iter_mut().zip(&power) {
                    for (w, c) in bucket {
                        *slot.entry(w.clone()).or_insert(0) += c;
                    }
                }
            }
            acc
        }
    };
    let l = Arc::new(l);
    memo.insert(key, l.clone());
    Ok(l)
}

/// Words of length at most `maxlen` in the language of `e`, sorted; fails
/// with `AmbiguousExpression` if some word has two derivations.
pub fn kleene_enumerate(e: &Kleene, maxlen: usize, labels: &[String]) -> Result<Vec<Vec<usize>>> {
    let ms = kleene_multiset(e, maxlen)?;
    if let Some((w, &c)) = ms.iter().find(|(_, &c)| c > 1) {
        let sep = if labels.iter().all(|l| l.chars().count() == 1) { "" } else { "·" };
        let word = w.iter().map(|&a| labels[a].as_str()).collect::<Vec<_>>().join(sep);
        return Err(Error::AmbiguousExpression { word, count: c });
    }
    Ok(ms.into_keys().collect())
}

/// Number of derivations of each length `0..=maxlen`, computed without
/// materialising words.
pub fn kleene_counts(e: &Kleene, maxlen: usize) -> Result<Vec<u128>> {
    let mut memo = HashMap::new();
    counts_rec(e, maxlen, &mut memo)
}

fn mul_counts(x: &[u128], y: &[u128]) -> Vec<u128> {
    let n = x.len();
    let mut out = vec![0u128; n];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].saturating_add(a.saturating_mul(b));
        }
    }
    out
}

fn counts_rec(
    e: &Kleene,
    maxlen: usize,
    memo: &mut HashMap<*const KleeneExpr, Vec<u128>>,
) -> Result<Vec<u128>> {
    let key = Arc::as_ptr(e);
    if let Some(c) = memo.get(&key) {
        return Ok(c.clone());
    }
    let mut unit = vec![0u128; maxlen + 1];
    unit[0] = 1;
    let c = match &**e {
        KleeneExpr::Epsilon => unit,
        KleeneExpr::Letter(_) => {
            let mut c = vec![0u128; maxlen + 1];
            if maxlen >= 1 {
                c[1] = 1;
            }
            c
        }
        KleeneExpr::Loop(_) => return Err(Error::UnresolvedPlaceholder),
        KleeneExpr::Concat(ps) => {
            let mut acc = unit;
            for p in ps {
                acc = mul_counts(&acc, &counts_rec(p, maxlen, memo)?);
            }
            acc
        }
        KleeneExpr::Union(ps) => {
            let mut acc = vec![0u128; maxlen + 1];
            for p in ps {
                for (a, b) in acc.iter_mut().zip(counts_rec(p, maxlen, memo)?) {
                    *a = a.saturating_add(b);
                }
            }
            acc
        }
        KleeneExpr::Star(inner) => {
            let f = counts_rec(inner, maxlen, memo)?;
            if f[0] != 0 {
                return Err(Error::StarOfUnit);
            }
            // s = 1 + f·s, solved degree by degree
            let mut s = vec![0u128; maxlen + 1];
            s[0] = 1;
            for k in 1..=maxlen {
                let mut acc = 0u128;
                for j in 1..=k {
                    acc = acc.saturating_add(f[j].saturating_mul(s[k - j]));
                }
                s[k] = acc;
            }
            s
        }
    };
    memo.insert(key, c.clone());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn labels(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn star_of_letter_language() {
        let e = star(letter(0));
        let words = kleene_enumerate(&e, 3, &labels(1)).unwrap();
        assert_eq!(words, vec![vec![], vec![0], vec![0, 0], vec![0, 0, 0]]);
        let r = kleene_to_rf(&e, &[0]).unwrap();
        let one = Polynomial::one();
        let expected = RationalFunction::new(one.clone(), &one - &Polynomial::var(0)).unwrap();
        assert!(r.equals(&expected));
    }

    #[test]
    fn example_expression() {
        // 3(33)*2 with labels 1,2,3 -> ids 0,1,2
        let ls: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
        let e = concat(vec![letter(2), star(concat(vec![letter(2), letter(2)])), letter(1)]);
        assert_eq!(e.render(&ls, 1000).unwrap(), "3(33)*2");
        let words = kleene_enumerate(&e, 6, &ls).unwrap();
        assert_eq!(words, vec![vec![2, 1], vec![2, 2, 2, 1], vec![2, 2, 2, 2, 2, 1]]);
        assert_eq!(kleene_counts(&e, 6).unwrap(), vec![0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn zimin_examples() {
        let ls = labels(3);
        let single = star(union(vec![letter(0)]));
        assert_eq!(zimin_unionless(&single).render(&ls, 100).unwrap(), "a*");
        let two = star(union(vec![letter(0), letter(1)]));
        assert_eq!(two.render(&ls, 100).unwrap(), "{a,b}*");
        let z = zimin_unionless(&two);
        assert_eq!(z.render(&ls, 100).unwrap(), "(a*b)*a*");
        assert!(!z.has_union());
        let three = star(union(vec![letter(0), letter(1), letter(2)]));
        let z3 = zimin_unionless(&three);
        assert!(!z3.has_union());
        assert_eq!(
            kleene_enumerate(&z3, 8, &ls).unwrap(),
            kleene_enumerate(&three, 8, &ls).unwrap()
        );
    }

    #[test]
    fn ambiguity_is_reported() {
        let e = star(union(vec![letter(0), concat(vec![letter(0), letter(0)])]));
        assert!(matches!(
            kleene_enumerate(&e, 3, &labels(1)),
            Err(Error::AmbiguousExpression { .. })
        ));
        assert_eq!(kleene_counts(&e, 3).unwrap(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn star_of_unit_rejected() {
        let e = star(union(vec![epsilon(), letter(0)]));
        assert!(matches!(kleene_to_rf(&e, &[0]), Err(Error::StarOfUnit)));
    }

    #[test]
    fn geometric_union() {
        let e = star(union(vec![letter(0), letter(1), letter(2)]));
        let r = kleene_to_rf(&e, &[0, 1, 2]).unwrap();
        let one = Polynomial::one();
        let den = &(&(&one - &Polynomial::var(0)) - &Polynomial::var(1)) - &Polynomial::var(2);
        assert!(r.equals(&RationalFunction::new(one, den).unwrap()));
    }
}
