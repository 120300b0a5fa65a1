//! Built-in categories in closed form.
//!
//! All F tables are in the vacuum gauge: entries with a vacuum among the upper
//! labels `j, k, l` equal 1.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{Category, FKey, FSymbolTable, FusionRing, Label, QuantumDims};

/// Golden ratio `(1 + sqrt 5) / 2`, the quantum dimension of the Fibonacci `tau`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Quantum dimension `(3 + sqrt 13) / 2` of the non-invertible Haagerup objects.
pub fn haagerup_rho_dim() -> f64 {
    (3.0 + 13f64.sqrt()) / 2.0
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Fills every admissible key with `f(key)`.
fn table(ring: &FusionRing, f: impl Fn(&FKey) -> Complex64) -> FSymbolTable {
    let entries: BTreeMap<FKey, Complex64> = ring.admissible_keys().into_iter().map(|k| (k, f(&k))).collect();
    FSymbolTable::new(ring.num_labels(), entries)
}

fn build(name: &str, labels: &[&str], ring: FusionRing, dims: Vec<f64>, f: FSymbolTable) -> Category {
    Category::new(name, labels.iter().map(|s| s.to_string()).collect(), ring, QuantumDims::new(dims), f)
        .expect("built-in category is structurally valid")
}

/// Vec(Z2): the toric code. Every admissible F-symbol is 1.
pub fn toric_code() -> Category {
    let ring = FusionRing::cyclic(2).unwrap();
    let f = table(&ring, |_| one());
    build("toric_code", &["0", "1"], ring, vec![1.0, 1.0], f)
}

/// Vec(Z3) with trivial associator; `1* = 2`.
pub fn vec_z3() -> Category {
    let ring = FusionRing::cyclic(3).unwrap();
    let f = table(&ring, |_| one());
    build("vec_z3", &["0", "1", "2"], ring, vec![1.0; 3], f)
}

/// Vec(Z3) twisted by the generating 3-cocycle
/// `omega(a, b, c) = exp(2 pi i a (b + c - [b + c]) / 9)`. Its F-symbols are
/// cube roots of unity and it is not tetrahedrally symmetric in this gauge.
pub fn vec_z3_twisted() -> Category {
    let ring = FusionRing::cyclic(3).unwrap();
    let f = table(&ring, |key| {
        let (a, b, c) = (key[1].idx(), key[2].idx(), key[3].idx());
        let carry = b + c - (b + c) % 3;
        Complex64::from_polar(1.0, 2.0 * PI * (a * carry) as f64 / 9.0)
    });
    build("vec_z3_twisted", &["0", "1", "2"], ring, vec![1.0; 3], f)
}

pub fn fibonacci_ring() -> FusionRing {
    let (v, t) = (Label(0), Label(1));
    FusionRing::new(vec![v, t], [[v, v, v], [v, t, t], [t, v, t], [t, t, v], [t, t, t]]).unwrap()
}

/// Fibonacci category with the real symmetric gauge
/// `F_tau^{tau tau tau} = [[1/phi, 1/sqrt phi], [1/sqrt phi, -1/phi]]`.
pub fn fibonacci() -> Category {
    let ring = fibonacci_ring();
    let t = Label(1);
    let f = table(&ring, |key| {
        let [i, j, k, l, m, n] = *key;
        if i == t && j == t && k == t && l == t {
            match (m.is_vacuum(), n.is_vacuum()) {
                (true, true) => Complex64::new(1.0 / PHI, 0.0),
                (false, false) => Complex64::new(-1.0 / PHI, 0.0),
                _ => Complex64::new(1.0 / PHI.sqrt(), 0.0),
            }
        } else {
            one()
        }
    });
    build("fibonacci", &["1", "tau"], ring, vec![1.0, PHI], f)
}

pub fn ising_ring() -> FusionRing {
    let (v, s, p) = (Label(0), Label(1), Label(2));
    let mut triples = vec![[v, v, v], [s, s, v], [s, s, p], [p, p, v]];
    for x in [s, p] {
        triples.push([v, x, x]);
        triples.push([x, v, x]);
    }
    triples.push([s, p, s]);
    triples.push([p, s, s]);
    FusionRing::new(vec![v, s, p], triples).unwrap()
}

/// Ising category with labels `1, sigma, psi`.
pub fn ising() -> Category {
    let ring = ising_ring();
    let (s, p) = (Label(1), Label(2));
    let f = table(&ring, |key| {
        let [i, j, k, l, m, n] = *key;
        if i == s && j == s && k == s && l == s {
            let sign = if m == p && n == p { -1.0 } else { 1.0 };
            Complex64::new(sign / SQRT_2, 0.0)
        } else if (i == p && j == s && k == p && l == s) || (i == s && j == p && k == s && l == p) {
            Complex64::new(-1.0, 0.0)
        } else {
            one()
        }
    });
    build("ising", &["1", "sigma", "psi"], ring, vec![1.0, SQRT_2, 1.0], f)
}

/// The Haagerup H3 fusion ring with labels
/// `1, alpha, alpha*, rho, alpha rho, alpha* rho`.
pub fn h3_ring() -> FusionRing {
    // row ⊗ column; invertible part is Z3 acting on the three rho's
    let inv_times_rho = |g: usize, r: usize| -> usize {
        // alpha ⊗ rho = alpha rho, alpha ⊗ alpha rho = alpha* rho, alpha ⊗ alpha* rho = rho
        3 + (r - 3 + g) % 3
    };
    let rho_times_inv = |r: usize, g: usize| -> usize {
        // rho ⊗ alpha = alpha* rho: right action runs the other way
        3 + (r - 3 + 3 - g) % 3
    };
    let mut triples = Vec::new();
    for a in 0..6usize {
        for b in 0..6usize {
            let products: Vec<usize> = match (a < 3, b < 3) {
                (true, true) => vec![(a + b) % 3],
                (true, false) => vec![inv_times_rho(a, b)],
                (false, true) => vec![rho_times_inv(a, b)],
                (false, false) => {
                    // r_x ⊗ r_y = g + Z with g = x - y in Z3
                    let (x, y) = (a - 3, b - 3);
                    vec![(3 + x - y) % 3, 3, 4, 5]
                }
            };
            for c in products {
                triples.push([Label(a as u8), Label(b as u8), Label(c as u8)]);
            }
        }
    }
    let dual = vec![Label(0), Label(2), Label(1), Label(3), Label(4), Label(5)];
    FusionRing::new(dual, triples).unwrap()
}

/// Label names of the H3 ring.
pub const H3_LABELS: [&str; 6] = ["1", "alpha", "alpha*", "rho", "alpha_rho", "alpha*_rho"];

/// H3 fusion ring with quantum dimensions and no F-symbols.
pub fn h3() -> Category {
    let ring = h3_ring();
    let r = haagerup_rho_dim();
    let f = FSymbolTable::new(6, BTreeMap::new());
    build("h3_ring", &H3_LABELS, ring, vec![1.0, 1.0, 1.0, r, r, r], f)
}

/// Built-ins with complete F data, in a fixed order.
pub fn with_f_data() -> Vec<Category> {
    vec![toric_code(), vec_z3(), fibonacci(), ising()]
}

/// Looks a built-in up by name.
pub fn by_name(name: &str) -> Option<Category> {
    match name {
        "toric_code" | "toric" | "z2" => Some(toric_code()),
        "vec_z3" | "z3" => Some(vec_z3()),
        "vec_z3_twisted" => Some(vec_z3_twisted()),
        "fibonacci" | "fib" => Some(fibonacci()),
        "ising" => Some(ising()),
        "h3_ring" | "h3" => Some(h3()),
        _ => None,
    }
}

pub const NAMES: [&str; 6] = ["toric_code", "vec_z3", "vec_z3_twisted", "fibonacci", "ising", "h3_ring"];
