use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest variable count the brute-force evaluators accept.
pub const MAX_EVAL_VARS: usize = 20;

/// A 3-CNF formula. Literal `i` is `x_i`, `-i` its negation, `1 <= i <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > n {
                    return Err(Error::Formula(format!("literal {l} outside 1..={n}")));
                }
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Truth of the matrix under `assignment[i - 1]` for `x_i`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.m());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// `∃x1 ∀x2 ∃x3 … ∀xn` over a 3-CNF matrix, with `n` even.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QbfFormula {
    matrix: CnfFormula,
}

impl QbfFormula {
    /// Wraps `matrix`; an odd variable count gets a trailing universal
    /// variable that occurs in no clause, which leaves the truth value unchanged.
    pub fn new(mut matrix: CnfFormula) -> Self {
        if matrix.n % 2 == 1 {
            matrix.n += 1;
        }
        QbfFormula { matrix }
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn to_qdimacs(&self) -> String {
        let prefix: Vec<&str> = (1..=self.n()).map(|i| if i % 2 == 1 { "e" } else { "a" }).collect();
        format!("q {}\n{}", prefix.join(" "), self.matrix.to_dimacs())
    }
}

/// Reads DIMACS CNF with exactly three literals per clause. Returns the
/// formula and the quantifier letters of a `q e a …` line when present.
pub fn parse_dimacs(text: &str) -> Result<(CnfFormula, Option<Vec<char>>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut prefix = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('c') || body.starts_with('%') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(err("expected `p cnf <vars> <clauses>`".into()));
                }
                let n = toks[2].parse().map_err(|_| err(format!("bad variable count `{}`", toks[2])))?;
                let m = toks[3].parse().map_err(|_| err(format!("bad clause count `{}`", toks[3])))?;
                header = Some((n, m));
            }
            "q" => {
                let mut letters = Vec::new();
                for t in &toks[1..] {
                    match *t {
                        "e" => letters.push('e'),
                        "a" => letters.push('a'),
                        other => return Err(err(format!("unknown quantifier `{other}`"))),
                    }
                }
                prefix = Some(letters);
            }
            _ => {
                if header.is_none() {
                    return Err(err("clause before `p cnf` header".into()));
                }
                for t in toks {
                    let lit: i32 = t.parse().map_err(|_| err(format!("bad literal `{t}`")))?;
                    if lit == 0 {
                        if current.len() != 3 {
                            return Err(err(format!("clause has {} literals, expected 3", current.len())));
                        }
                        clauses.push([current[0], current[1], current[2]]);
                        current.clear();
                    } else {
                        current.push(lit);
                    }
                }
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Formula("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(Error::Formula("last clause is not terminated by 0".into()));
    }
    if clauses.len() != m {
        return Err(Error::Formula(format!("header announces {m} clauses, found {}", clauses.len())));
    }
    Ok((CnfFormula::new(n, clauses)?, prefix))
}

/// Reads a quantified formula. The prefix, if given, must alternate starting
/// with `e` and cover the variables (a missing trailing `a` is allowed).
pub fn parse_qbf(text: &str) -> Result<QbfFormula> {
    let (matrix, prefix) = parse_dimacs(text)?;
    if let Some(p) = prefix {
        let expected: Vec<char> = (1..=p.len()).map(|i| if i % 2 == 1 { 'e' } else { 'a' }).collect();
        if p != expected {
            return Err(Error::Formula("quantifiers must alternate starting with `e`".into()));
        }
        if p.len() < matrix.n || p.len() > matrix.n + 1 {
            return Err(Error::Formula(format!("{} quantifiers for {} variables", p.len(), matrix.n)));
        }
        let mut matrix = matrix;
        matrix.n = matrix.n.max(p.len());
        return Ok(QbfFormula::new(matrix));
    }
    Ok(QbfFormula::new(matrix))
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_EVAL_VARS {
        return Err(Error::SizeLimit(format!("{n} variables, at most {MAX_EVAL_VARS} evaluated")));
    }
    Ok(())
}

/// Truth of the alternating formula by exhaustive evaluation.
pub fn eval_qbf(f: &QbfFormula) -> Result<bool> {
    guard(f.n())?;
    fn rec(f: &CnfFormula, i: usize, a: &mut Vec<bool>) -> bool {
        if i == f.n {
            return f.satisfied_by(a);
        }
        let mut results = [false; 2];
        for (slot, value) in [false, true].into_iter().enumerate() {
            a[i] = value;
            results[slot] = rec(f, i + 1, a);
        }
        // variable i + 1 is existential when i is even
        if i.is_multiple_of(2) {
            results[0] || results[1]
        } else {
            results[0] && results[1]
        }
    }
    Ok(rec(f.matrix(), 0, &mut vec![false; f.n()]))
}

/// A satisfying assignment, if any, by exhaustive search.
pub fn eval_cnf_sat(f: &CnfFormula) -> Result<Option<Vec<bool>>> {
    guard(f.n)?;
    for mask in 0u64..(1u64 << f.n) {
        let a: Vec<bool> = (0..f.n).map(|i| mask >> i & 1 == 1).collect();
        if f.satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

fn all_clauses(n: usize) -> Vec<[i32; 3]> {
    let lits: Vec<i32> = (1..=n as i32).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                out.push([lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

fn normalize(clauses: &[[i32; 3]]) -> Vec<[i32; 3]> {
    let mut cs: Vec<[i32; 3]> = clauses
        .iter()
        .map(|c| {
            let mut c = *c;
            c.sort_by_key(|&l| (l.abs(), -l));
            c
        })
        .collect();
    cs.sort();
    cs
}

/// Multisets of `m` clauses over `n` variables.
fn formulas(n: usize, m: usize) -> Vec<Vec<[i32; 3]>> {
    let clauses = all_clauses(n);
    let mut out = Vec::new();
    fn rec(cl: &[[i32; 3]], from: usize, m: usize, cur: &mut Vec<[i32; 3]>, out: &mut Vec<Vec<[i32; 3]>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in from..cl.len() {
            cur.push(cl[i]);
            rec(cl, i, m, cur, out);
            cur.pop();
        }
    }
    rec(&clauses, 0, m, &mut Vec::new(), &mut out);
    out
}

fn flip(clauses: &[[i32; 3]], signs: &[bool], perm: &[usize]) -> Vec<[i32; 3]> {
    let map = |l: i32| {
        let v = l.unsigned_abs() as usize - 1;
        let target = perm[v] as i32 + 1;
        if (l > 0) != signs[v] {
            target
        } else {
            -target
        }
    };
    normalize(&clauses.iter().map(|c| [map(c[0]), map(c[1]), map(c[2])]).collect::<Vec<_>>())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn corpus(max_n: usize, max_m: usize, permute: bool, min_n: usize) -> Vec<Vec<(usize, Vec<[i32; 3]>)>> {
    let mut out = Vec::new();
    for n in min_n..=max_n {
        let perms = if permute { permutations(n) } else { vec![(0..n).collect()] };
        let mut seen: BTreeSet<Vec<[i32; 3]>> = BTreeSet::new();
        let mut group = Vec::new();
        for m in 1..=max_m {
            for f in formulas(n, m) {
                let mut canon: Option<Vec<[i32; 3]>> = None;
                for mask in 0..1u32 << n {
                    let signs: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    for p in &perms {
                        let g = flip(&f, &signs, p);
                        if canon.as_ref().is_none_or(|c| g < *c) {
                            canon = Some(g);
                        }
                    }
                }
                let canon = canon.expect("at least one symmetry");
                if seen.insert(canon.clone()) {
                    group.push((n, canon));
                }
            }
        }
        out.push(group);
    }
    out
}

/// Every 3-CNF formula with `1 <= n <= max_n` variables and `1 <= m <= max_m`
/// clauses, one representative per class under renaming and negating variables.
pub fn cnf_corpus(max_n: usize, max_m: usize) -> Vec<CnfFormula> {
    corpus(max_n, max_m, true, 1)
        .into_iter()
        .flatten()
        .map(|(n, c)| CnfFormula { n, clauses: c })
        .collect()
}

/// Every formula `∃x1 ∀x2 …` with exactly `n` variables and `1..=max_m` clauses,
/// one representative per class under negating variables.
pub fn qbf_corpus(n: usize, max_m: usize) -> Vec<QbfFormula> {
    corpus(n, max_m, false, n)
        .into_iter()
        .flatten()
        .map(|(n, c)| QbfFormula::new(CnfFormula { n, clauses: c }))
        .collect()
}
