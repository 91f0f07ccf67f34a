use crate::error::Result;
use crate::gadgets::{CnfFormula, QbfFormula};
use crate::graph::{StaticGraph, TemporalGraph, Time};
use crate::instance::Instance;

fn lit_name(l: i32) -> String {
    if l > 0 {
        format!("x{l}")
    } else {
        format!("nx{}", -l)
    }
}

/// Temporal instance (unit lengths, no deadline) that Traveller wins under
/// local discovery iff the quantified formula is true. Budget `k = 2m + n/2`.
pub fn gen_li_pspace(f: &QbfFormula) -> Result<Instance> {
    let (n, m) = (f.n(), f.m());
    let k = (2 * m + n / 2) as u32;
    let forced = k + 1;
    let big_l = (7 * n / 2) as Time;
    let mut b = TemporalGraph::builder();
    b.vertex("s");
    b.vertex("t");
    b.edge("s", "v1", 0, 1, forced);
    for i in 1..=n {
        let (v, next) = (format!("v{i}"), format!("v{}", i + 1));
        let (x, nx, a) = (format!("x{i}"), format!("nx{i}"), format!("a{i}"));
        let half = (i / 2) as Time;
        if i % 2 == 1 {
            // Traveller picks the value by the side of the diamond taken
            let base = 7 * half;
            b.edge(&v, &x, base + 1, 1, forced)
                .edge(&v, &nx, base + 1, 1, forced)
                .edge(&x, &next, base + 2, 1, forced)
                .edge(&nx, &next, base + 2, 1, forced)
                .edge(&v, &a, base + 1, 1, forced);
        } else {
            // Blocker picks the value by which single-copy edge survives
            let base = 7 * ((i - 1) / 2) as Time;
            let bi = format!("b{i}");
            b.edge(&v, &x, base + 3, 1, 1)
                .edge(&v, &nx, base + 6, 1, 1)
                .edge(&x, &next, 7 * half, 1, forced)
                .edge(&nx, &next, 7 * half, 1, forced)
                .edge(&x, &bi, base + 4, 1, forced)
                .edge(&bi, &v, base + 5, 1, forced)
                .edge(&bi, "t", base + 5, 1, 2)
                .edge(&v, &a, base + 3, 1, forced);
        }
        b.edge(&a, "t", big_l + 5, 1, k - half as u32);
        let z = format!("z{i}");
        b.edge(&x, &z, big_l + 4, 1, 1)
            .edge(&nx, &z, big_l + 4, 1, 1)
            .edge(&z, "t", big_l + 5, 1, (2 * m) as u32);
    }
    let last = format!("v{}", n + 1);
    let a_last = format!("a{}", n + 1);
    b.edge(&last, &a_last, big_l + 1, 1, forced)
        .edge(&a_last, "t", big_l + 5, 1, k - (n / 2) as u32)
        .edge(&last, "w", big_l + 1, 1, forced)
        .edge("w", "t", big_l + 2, 1, 1);
    for (j, clause) in f.matrix().clauses.iter().enumerate() {
        let c = format!("c{}", j + 1);
        b.edge("w", &c, big_l + 2, 1, 2);
        for &l in clause {
            b.edge(&c, &lit_name(l), big_l + 3, 1, forced);
        }
    }
    Instance::temporal(b.build()?, "s", "t", k)
}

/// Undirected weighted instance with budget 4 whose deadline can be met under
/// local discovery iff the formula is satisfiable.
pub fn gen_static_np(f: &CnfFormula) -> Result<Instance> {
    let (n, m) = (f.n as u64, f.m() as u64);
    let big_m = 2 * n + 2 * m + 1;
    let deadline = 27 * big_m + 2 * n + 2 * m;
    let forced = 5;
    let mut b = StaticGraph::builder(false);
    b.vertex("v0");
    b.vertex("t");
    for i in 1..=f.n {
        let (prev, v) = (format!("v{}", i - 1), format!("v{i}"));
        let (x, nx) = (format!("x{i}"), format!("nx{i}"));
        let (z, nz) = (format!("z{i}"), format!("nz{i}"));
        b.edge(&prev, &x, 1, forced)
            .edge(&prev, &nx, 1, forced)
            .edge(&x, &v, 1, forced)
            .edge(&nx, &v, 1, forced)
            .edge(&x, &z, 10 * big_m, 1)
            .edge(&nx, &nz, 10 * big_m, 1)
            .edge(&z, "t", 0, 2)
            .edge(&nz, "t", 0, 2);
    }
    let vn = format!("v{}", f.n);
    b.edge(&vn, "w", 2 * m + 27 * big_m, forced)
        .edge("w", "t", 0, 4)
        .edge(&vn, "c1", 9 * big_m, 1);
    for (idx, clause) in f.clauses.iter().enumerate() {
        let j = idx as u64 + 1;
        let (c, next) = (format!("c{j}"), format!("c{}", j + 1));
        for (pos, &l) in clause.iter().enumerate() {
            let alpha = format!("alpha{j}_{}", pos + 1);
            let beta = format!("beta{j}_{}", pos + 1);
            b.edge(&c, &alpha, 1, forced)
                .edge(&alpha, &next, 1, 3)
                .edge(&alpha, &beta, 2 * m - 2 * j + 1, 2)
                .edge(&beta, &lit_name(l), 8 * big_m, forced);
        }
    }
    b.edge(&format!("c{}", m + 1), "t", 18 * big_m, forced);
    Ok(Instance::from_static(b.build()?, "v0", "t", 4)?.with_deadline(Some(deadline)))
}

/// Temporal instance with unit lengths and budget 2 that Traveller wins under
/// local discovery iff the formula is satisfiable.
pub fn gen_li_np(f: &CnfFormula) -> Result<Instance> {
    let (n, m) = (f.n as Time, f.m() as Time);
    let last = 2 * n + 2 * m + 2;
    let forced = 3;
    let mut b = TemporalGraph::builder();
    b.vertex("v0");
    b.vertex("t");
    for i in 1..=f.n {
        let it = i as Time;
        let (prev, v) = (format!("v{}", i - 1), format!("v{i}"));
        let (x, nx) = (format!("x{i}"), format!("nx{i}"));
        let (z, nz) = (format!("z{i}"), format!("nz{i}"));
        b.edge(&prev, &x, 2 * it - 1, 1, forced)
            .edge(&prev, &nx, 2 * it - 1, 1, forced)
            .edge(&x, &v, 2 * it, 1, forced)
            .edge(&nx, &v, 2 * it, 1, forced)
            .edge(&x, &z, last + 2, 1, 1)
            .edge(&nx, &nz, last + 2, 1, 1)
            .edge(&z, "t", last + 3, 1, 2)
            .edge(&nz, "t", last + 3, 1, 2);
    }
    let vn = format!("v{}", f.n);
    b.edge(&vn, "w", 2 * n + 1, 1, forced)
        .edge("w", "t", 2 * n + 2, 1, 2)
        .edge(&vn, "c1", 2 * n + 1, 1, 1);
    for (idx, clause) in f.clauses.iter().enumerate() {
        let j = idx as Time + 1;
        let (c, next) = (format!("c{j}"), format!("c{}", j + 1));
        for (pos, &l) in clause.iter().enumerate() {
            let alpha = format!("alpha{j}_{}", pos + 1);
            let beta = format!("beta{j}_{}", pos + 1);
            b.edge(&c, &alpha, 2 * n + 2 * j, 1, forced)
                .edge(&alpha, &next, 2 * n + 2 * j + 1, 1, 1)
                .edge(&alpha, &beta, last, 1, forced)
                .edge(&beta, &lit_name(l), last + 1, 1, forced);
        }
    }
    b.edge(&format!("c{}", m + 1), "t", last, 1, forced);
    Instance::temporal(b.build()?, "v0", "t", 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qbf(n: usize, clauses: Vec<[i32; 3]>) -> QbfFormula {
        QbfFormula::new(CnfFormula::new(n, clauses).unwrap())
    }

    #[test]
    fn pspace_sizes() {
        let f = qbf(2, vec![[1, 2, 2], [1, -2, -2]]);
        let inst = gen_li_pspace(&f).unwrap();
        assert_eq!(inst.k, 5);
        let g = inst.temporal_graph().unwrap();
        assert_eq!(g.horizon(), 7 + 6);
        let one = gen_li_pspace(&qbf(2, vec![[1, 2, 2]])).unwrap();
        assert_eq!(one.vertices().len(), 17);
    }

    #[test]
    fn pspace_copy_audit() {
        let f = qbf(2, vec![[1, 2, 2], [1, -2, -2]]);
        let inst = gen_li_pspace(&f).unwrap();
        let g = inst.temporal_graph().unwrap();
        let id = |name: &str| g.vertices().id(name).unwrap();
        let copies = |u: &str, v: &str, tau: Time| g.edge(g.find_edge(id(u), id(v), tau, 1).unwrap()).copies;
        assert_eq!(copies("s", "v1", 0), 6);
        assert_eq!(copies("v2", "x2", 3), 1);
        assert_eq!(copies("v2", "nx2", 6), 1);
        assert_eq!(copies("b2", "t", 5), 2);
        assert_eq!(copies("a1", "t", 12), 5);
        assert_eq!(copies("a2", "t", 12), 4);
        assert_eq!(copies("a3", "t", 12), 4);
        assert_eq!(copies("z1", "t", 12), 4);
        assert_eq!(copies("w", "c2", 9), 2);
        assert_eq!(copies("w", "t", 9), 1);
    }

    #[test]
    fn static_sizes() {
        let f = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let inst = gen_static_np(&f).unwrap();
        assert_eq!(inst.k, 4);
        assert_eq!(inst.deadline, Some(139));
        let g = inst.static_graph().unwrap();
        assert!(!g.is_directed());
        assert!(g.edges().iter().all(|e| e.copies <= 5));
    }

    #[test]
    fn li_np_timing() {
        let f = CnfFormula::new(1, vec![[1, 1, -1]]).unwrap();
        let inst = gen_li_np(&f).unwrap();
        let g = inst.temporal_graph().unwrap();
        assert_eq!(inst.k, 2);
        assert!(g.edges().iter().all(|e| e.d == 1));
        assert_eq!(g.horizon(), 2 + 2 + 2 + 3 + 1);
    }

    #[test]
    fn generation_is_deterministic() {
        let f = qbf(2, vec![[1, 2, 2], [1, -2, -2]]);
        let a = crate::serialize_instance(&gen_li_pspace(&f).unwrap());
        let b = crate::serialize_instance(&gen_li_pspace(&f).unwrap());
        assert_eq!(a, b);
    }
}
