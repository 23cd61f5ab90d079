//! Entailment over three rational variables decided by enumerating the
//! vertices of a bounded polyhedron.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specpl_core::linear::{q, Constraint, LinExpr, System, Q};

/// `coef . x <= rhs`, or `=` when `eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub coef: [i64; 3],
    pub rhs: i64,
    pub eq: bool,
}

/// Every variable lies in `[-BOX, BOX]`, so the polyhedron is bounded.
pub const BOX: i64 = 6;

impl Row {
    fn expr(&self) -> LinExpr<u8> {
        let mut e = LinExpr::zero();
        for (i, &c) in self.coef.iter().enumerate() {
            e.add_term(i as u8, q(c as i128));
        }
        e
    }

    pub fn constraint(&self) -> Constraint<u8> {
        let rhs = LinExpr::constant(q(self.rhs as i128));
        if self.eq {
            Constraint::eq(self.expr(), rhs)
        } else {
            Constraint::le(self.expr(), rhs)
        }
    }

    fn value(&self, x: &[Q; 3]) -> Q {
        (0..3).map(|i| q(self.coef[i] as i128) * x[i]).fold(q(0), |a, b| a + b)
    }

    fn holds(&self, x: &[Q; 3]) -> bool {
        let v = self.value(x);
        if self.eq {
            v == q(self.rhs as i128)
        } else {
            v <= q(self.rhs as i128)
        }
    }
}

fn box_rows() -> Vec<Row> {
    let mut out = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut coef = [0; 3];
            coef[i] = s;
            out.push(Row { coef, rhs: BOX, eq: false });
        }
    }
    out
}

pub fn random_row(rng: &mut ChaCha8Rng, allow_eq: bool) -> Row {
    Row {
        coef: [rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
        rhs: rng.gen_range(-5..=5),
        eq: allow_eq && rng.gen_ratio(1, 5),
    }
}

/// The box plus up to four random rows.
pub fn random_system(rng: &mut ChaCha8Rng) -> Vec<Row> {
    let n = rng.gen_range(1..=4);
    let mut rows = box_rows();
    rows.extend((0..n).map(|_| random_row(rng, true)));
    rows
}

pub fn to_system(rows: &[Row]) -> System<u8> {
    System::from_constraints(rows.iter().map(Row::constraint))
}

fn det3(m: &[[Q; 3]; 3]) -> Q {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Feasible points where three rows are tight.
pub fn vertices(rows: &[Row]) -> Vec<[Q; 3]> {
    let mut out = Vec::new();
    let n = rows.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let tri = [rows[a], rows[b], rows[c]];
                let m: [[Q; 3]; 3] = tri.map(|r| r.coef.map(|x| q(x as i128)));
                let d = det3(&m);
                if d == q(0) {
                    continue;
                }
                let rhs = tri.map(|r| q(r.rhs as i128));
                let mut x = [q(0); 3];
                for (i, xi) in x.iter_mut().enumerate() {
                    let mut mi = m;
                    for row in 0..3 {
                        mi[row][i] = rhs[row];
                    }
                    *xi = det3(&mi) / d;
                }
                if rows.iter().all(|r| r.holds(&x)) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// A bounded polyhedron entails `query` iff it is empty or every vertex
/// satisfies it.
pub fn brute_entails(rows: &[Row], query: &Row) -> bool {
    vertices(rows).iter().all(|x| query.holds(x))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Agreement {
    pub compared: usize,
    /// Queries the vertex check found entailed.
    pub entailed: usize,
    pub disagreements: Vec<String>,
}

/// Compares [`System::entails`] with [`brute_entails`] on `count` random
/// systems, one random query each plus one query tight at a vertex.
pub fn entailment_agreement(seed: u64, count: usize) -> Agreement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Agreement::default();
    for _ in 0..count {
        let rows = random_system(&mut rng);
        let sys = to_system(&rows);
        let mut queries = vec![random_row(&mut rng, false)];
        if let Some(v) = vertices(&rows).first() {
            // a query whose boundary passes through a vertex
            let mut r = random_row(&mut rng, false);
            let val = r.value(v);
            if val.is_integer() {
                r.rhs = *val.numer() as i64;
                queries.push(r);
            }
        }
        for query in queries {
            out.compared += 1;
            let (got, want) = (sys.entails(&query.constraint()), brute_entails(&rows, &query));
            out.entailed += want as usize;
            if got != want {
                out.disagreements.push(format!("{rows:?} entails {query:?}: engine {got}, vertices {want}"));
            }
        }
    }
    out
}
