//! Constructors for the arrangements the toolkit ships with: the monomial
//! families G(r,p,l), the Coxeter families A/B/D plus F4 and H3, the boolean
//! arrangements, and the exceptional arrangements G24, G25, G26, G27, G29,
//! and G31.
//!
//! Hyperplanes of the hard-coded entries appear in the order of the factors
//! of the defining polynomial they were taken from, so published index-based
//! flat data can be replayed against these arrangements one-to-one. Within a
//! table, a coefficient is a dense vector of integers on ascending powers of
//! zeta (the canonical primitive root of the entry's conductor).

use crate::arrangement::Arrangement;
use crate::exactfield::{CycNum, Int, Rat};

/// Parsed catalog name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Name {
    /// Coordinate arrangement in C^n.
    Boolean(usize),
    /// Monomial arrangement G(r,p,l); braid:n, B:n, D:n are aliases for
    /// G(1,1,n), G(2,1,n), G(2,2,n).
    Monomial { r: u32, p: u32, l: usize },
    F4,
    H3,
    G24,
    G25,
    G26,
    G27,
    G29,
    G31,
}

/// Grammar: `G(r,p,l)`, `boolean:n`, `braid:n`, `B:n`, `D:n`, `F4`, `H3`,
/// `G24`, `G25`, `G26`, `G27`, `G29`, `G31`.
pub fn parse_name(name: &str) -> Result<Name, String> {
    match name {
        "F4" => return Ok(Name::F4),
        "H3" => return Ok(Name::H3),
        "G24" => return Ok(Name::G24),
        "G25" => return Ok(Name::G25),
        "G26" => return Ok(Name::G26),
        "G27" => return Ok(Name::G27),
        "G29" => return Ok(Name::G29),
        "G31" => return Ok(Name::G31),
        "G28" => return Err("unknown catalog name `G28` (the F4 arrangement is `F4`)".to_string()),
        "G30" => return Err("unknown catalog name `G30` (the H4 arrangement is not in the catalog)".to_string()),
        _ => {}
    }
    if let Some((kind, count)) = name.split_once(':') {
        let n: usize = count
            .parse()
            .map_err(|_| format!("bad count in catalog name `{name}`"))?;
        return match kind {
            "boolean" => Ok(Name::Boolean(n)),
            "braid" | "B" | "D" if n == 0 => {
                Err(format!("catalog name `{name}` needs a positive count"))
            }
            "braid" => Ok(Name::Monomial { r: 1, p: 1, l: n }),
            "B" => Ok(Name::Monomial { r: 2, p: 1, l: n }),
            "D" => Ok(Name::Monomial { r: 2, p: 2, l: n }),
            _ => Err(format!("unknown catalog family `{kind}`")),
        };
    }
    if let Some(inner) = name.strip_prefix("G(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected `G(r,p,l)`, got `{name}`"));
        }
        let r: u32 = parts[0]
            .parse()
            .map_err(|_| format!("bad r in `{name}`"))?;
        let p: u32 = parts[1]
            .parse()
            .map_err(|_| format!("bad p in `{name}`"))?;
        let l: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad l in `{name}`"))?;
        if r == 0 || p == 0 || l == 0 {
            return Err(format!("`{name}` needs positive parameters"));
        }
        if r % p != 0 {
            return Err(format!("`{name}` needs p dividing r"));
        }
        return Ok(Name::Monomial { r, p, l });
    }
    Err(format!("unknown catalog name `{name}`"))
}

/// Builds the arrangement a parsed name denotes.
pub fn build(name: &Name) -> Arrangement {
    match *name {
        Name::Boolean(n) => boolean(n),
        Name::Monomial { r, p, l } => monomial(r, p, l),
        Name::F4 => f4(),
        Name::H3 => h3(),
        Name::G24 => g24(),
        Name::G25 => g25(),
        Name::G26 => g26(),
        Name::G27 => g27(),
        Name::G29 => g29(),
        Name::G31 => g31(),
    }
}

/// Parses and builds in one step.
pub fn build_named(name: &str) -> Result<Arrangement, String> {
    Ok(build(&parse_name(name)?))
}

/// The coordinate arrangement: ker x_1, ..., ker x_n.
pub fn boolean(n: usize) -> Arrangement {
    let mut covectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![CycNum::zero(1); n];
        v[i] = CycNum::one(1);
        covectors.push(v);
    }
    Arrangement::from_covectors(n, 1, covectors).expect("coordinate covectors are distinct")
}

/// The monomial arrangement G(r,p,l) over conductor r: the hyperplanes
/// x_i = zeta^k x_j for i < j and 0 <= k < r (pairs in lexicographic order,
/// k ascending), followed by the coordinate hyperplanes exactly when p != r.
/// Panics unless p divides r and both are positive.
pub fn monomial(r: u32, p: u32, l: usize) -> Arrangement {
    assert!(r >= 1 && p >= 1 && l >= 1, "monomial parameters must be positive");
    assert_eq!(r % p, 0, "monomial family needs p dividing r");
    let mut covectors = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            for k in 0..r {
                let mut v = vec![CycNum::zero(r); l];
                v[i] = CycNum::one(r);
                v[j] = crate::exactfield::cyc_neg(&CycNum::zeta_pow(r, i64::from(k)));
                covectors.push(v);
            }
        }
    }
    if p != r {
        for i in 0..l {
            let mut v = vec![CycNum::zero(r); l];
            v[i] = CycNum::one(r);
            covectors.push(v);
        }
    }
    Arrangement::from_covectors(l, r, covectors).expect("monomial covectors are distinct")
}

/// Supported Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoxeterType {
    A,
    B,
    D,
    F4,
    H3,
}

/// Coxeter arrangements; `rank` is ignored for F4 and H3. The A_n arrangement
/// lives in C^(n+1) (it is the braid arrangement on n+1 coordinates).
pub fn coxeter(kind: CoxeterType, rank: usize) -> Arrangement {
    match kind {
        CoxeterType::A => monomial(1, 1, rank + 1),
        CoxeterType::B => monomial(2, 1, rank),
        CoxeterType::D => monomial(2, 2, rank),
        CoxeterType::F4 => f4(),
        CoxeterType::H3 => h3(),
    }
}

fn dense(conductor: u32, coeffs: &[i64]) -> CycNum {
    CycNum::from_coeffs(
        conductor,
        coeffs
            .iter()
            .map(|&c| Rat::from_integer(Int::from(c)))
            .collect(),
    )
}

fn from_table<const D: usize>(conductor: u32, rows: &[[&[i64]; D]]) -> Arrangement {
    let covectors = rows
        .iter()
        .map(|row| row.iter().map(|c| dense(conductor, c)).collect())
        .collect();
    Arrangement::from_covectors(D, conductor, covectors).expect("catalog table is valid")
}

/// The F4 reflection arrangement: 24 hyperplanes in C^4 with rational
/// normals, in defining-polynomial factor order.
pub fn f4() -> Arrangement {
    const T: [[&[i64]; 4]; 24] = [
        [&[1], &[0], &[0], &[0]],
        [&[0], &[1], &[0], &[0]],
        [&[0], &[0], &[1], &[0]],
        [&[0], &[0], &[0], &[1]],
        [&[1], &[1], &[0], &[0]],
        [&[0], &[1], &[1], &[0]],
        [&[0], &[0], &[1], &[1]],
        [&[1], &[1], &[1], &[0]],
        [&[0], &[1], &[2], &[0]],
        [&[0], &[1], &[1], &[1]],
        [&[1], &[1], &[2], &[0]],
        [&[1], &[1], &[1], &[1]],
        [&[0], &[1], &[2], &[1]],
        [&[1], &[2], &[2], &[0]],
        [&[1], &[1], &[2], &[1]],
        [&[0], &[1], &[2], &[2]],
        [&[1], &[2], &[2], &[1]],
        [&[1], &[1], &[2], &[2]],
        [&[1], &[2], &[3], &[1]],
        [&[1], &[2], &[2], &[2]],
        [&[1], &[2], &[3], &[2]],
        [&[1], &[2], &[4], &[2]],
        [&[1], &[3], &[4], &[2]],
        [&[2], &[3], &[4], &[2]],
    ];
    from_table(1, &T)
}

/// The H3 reflection arrangement: 15 hyperplanes in C^3 over conductor 5,
/// in defining-polynomial factor order. Coefficients are combinations of
/// b = zeta^2 + zeta^3.
pub fn h3() -> Arrangement {
    // p + q*b on the dense basis: [p, 0, q, q]
    const T: [[&[i64]; 3]; 15] = [
        [&[1], &[0], &[0]],
        [&[0], &[1], &[0]],
        [&[0], &[0], &[1]],
        [&[1], &[1], &[0]],
        [&[0], &[1], &[1]],
        [&[1], &[0, 0, -1, -1], &[0]],
        [&[1], &[-1, 0, -1, -1], &[0]],
        [&[1], &[0, 0, -1, -1], &[0, 0, -1, -1]],
        [&[1], &[-1, 0, -1, -1], &[-1, 0, -1, -1]],
        [&[1], &[1], &[1]],
        [&[1], &[0, 0, -1, -1], &[-1, 0, -1, -1]],
        [&[1], &[0, 0, -1, -1], &[1]],
        [&[1], &[1], &[2, 0, 1, 1]],
        [&[1], &[1], &[-1, 0, -1, -1]],
        [&[1], &[-2, 0, -2, -2], &[-1, 0, -1, -1]],
    ];
    from_table(5, &T)
}

/// The G24 reflection arrangement: 21 hyperplanes in C^3 over conductor 7,
/// in defining-polynomial factor order. Coefficients are combinations of
/// a = zeta + zeta^2 + zeta^4, encoded densely as [p, q, q, 0, q] = p + q*a.
pub fn g24() -> Arrangement {
    const T: [[&[i64]; 3]; 21] = [
        [&[1], &[1, 2, 2, 0, 2], &[0]],
        [&[1], &[-1, -2, -2, 0, -2], &[0]],
        [&[3], &[3, -1, -1, 0, -1], &[0, -2, -2, 0, -2]],
        [&[1], &[0], &[0]],
        [&[3], &[-4, -1, -1, 0, -1], &[-2, -2, -2, 0, -2]],
        [&[3], &[-7], &[4]],
        [&[3], &[7], &[-4]],
        [&[3], &[1, 2, 2, 0, 2], &[2, -2, -2, 0, -2]],
        [&[0], &[7], &[2, -3, -3, 0, -3]],
        [&[3], &[-1, -2, -2, 0, -2], &[4, -4, -4, 0, -4]],
        [&[3], &[4, 1, 1, 0, 1], &[2, 2, 2, 0, 2]],
        [&[3], &[-3, 1, 1, 0, 1], &[0, 2, 2, 0, 2]],
        [&[0], &[7], &[5, 3, 3, 0, 3]],
        [&[3], &[1, 2, 2, 0, 2], &[-4, -2, -2, 0, -2]],
        [&[3], &[-1, -2, -2, 0, -2], &[4, 2, 2, 0, 2]],
        [&[0], &[7], &[-10, -6, -6, 0, -6]],
        [&[3], &[-1, -2, -2, 0, -2], &[-2, 2, 2, 0, 2]],
        [&[3], &[-1, -2, -2, 0, -2], &[-8, -4, -4, 0, -4]],
        [&[3], &[1, 2, 2, 0, 2], &[8, 4, 4, 0, 4]],
        [&[3], &[1, 2, 2, 0, 2], &[-4, 4, 4, 0, 4]],
        [&[0], &[7], &[-4, 6, 6, 0, 6]],
    ];
    from_table(7, &T)
}

/// The G25 reflection arrangement: 12 hyperplanes in C^3 over conductor 3,
/// in defining-polynomial factor order.
pub fn g25() -> Arrangement {
    const W: &[i64] = &[0, 1]; // zeta
    const M: &[i64] = &[-1, -1]; // -(zeta + 1)
    const T: [[&[i64]; 3]; 12] = [
        [&[1], &[0], &[0]],
        [&[0], &[1], &[0]],
        [&[0], &[0], &[1]],
        [&[1], &[1], &[1]],
        [&[1], &[1], W],
        [&[1], &[1], M],
        [&[1], W, &[1]],
        [&[1], W, W],
        [&[1], W, M],
        [&[1], M, &[1]],
        [&[1], M, W],
        [&[1], M, M],
    ];
    from_table(3, &T)
}

/// The G26 reflection arrangement: 21 hyperplanes in C^3 over conductor 3,
/// in defining-polynomial factor order.
pub fn g26() -> Arrangement {
    const W: &[i64] = &[0, 1]; // zeta
    const W2: &[i64] = &[0, 0, 1]; // zeta^2
    const NW: &[i64] = &[0, -1];
    const NW2: &[i64] = &[0, 0, -1];
    const T: [[&[i64]; 3]; 21] = [
        [&[1], &[0], &[0]],
        [&[0], &[1], &[0]],
        [&[0], &[0], &[1]],
        [&[1], &[-1], &[0]],
        [&[1], NW, &[0]],
        [&[1], NW2, &[0]],
        [&[1], &[0], &[-1]],
        [&[1], &[0], NW],
        [&[1], &[0], NW2],
        [&[0], &[1], &[-1]],
        [&[0], &[1], NW],
        [&[0], &[1], NW2],
        [&[1], &[1], &[1]],
        [&[1], W, &[1]],
        [&[1], W2, &[1]],
        [&[1], &[1], W],
        [&[1], &[1], W2],
        [&[1], W2, W2],
        [&[1], W, W2],
        [&[1], W2, W],
        [&[1], W, W],
    ];
    from_table(3, &T)
}

/// The G27 reflection arrangement: 45 hyperplanes in C^3 over conductor 15,
/// in defining-polynomial factor order. Each coefficient is a dense integer
/// vector on zeta^0..zeta^7.
pub fn g27() -> Arrangement {
    const T: [[&[i64]; 3]; 45] = [
        [
            &[15],
            &[-15, -6, 12, -6, 18, -6, -18, 24],
            &[0, 6, -12, -4, 2, -4, 8, -4],
        ],
        [&[0], &[3], &[2, -1, 1, -1, -1, 3, 0, 1]],
        [
            &[15],
            &[-3, -24, 12, -6, 12, 6, -18, 0],
            &[-2, -16, 8, -4, 8, 4, -12, 0],
        ],
        [
            &[15],
            &[3, -18, 12, -6, -6, 12, -18, -12],
            &[2, -2, -2, 6, 6, -2, 8, 2],
        ],
        [
            &[15],
            &[-9, 0, 12, -6, 0, 0, -18, 12],
            &[4, 20, -22, 6, 0, -10, 28, -2],
        ],
        [
            &[15],
            &[-9, -3, 3, -9, 9, -3, -12, 9],
            &[-1, -2, 7, -1, -4, 3, -8, 1],
        ],
        [
            &[15],
            &[-9, 0, 12, -6, 0, 0, -18, 12],
            &[14, -20, -2, 6, 0, 10, 8, -22],
        ],
        [
            &[15],
            &[3, 0, 6, 12, 0, 0, 6, 6],
            &[-8, -10, 14, -2, 10, 0, -16, 14],
        ],
        [
            &[15],
            &[3, -9, 9, 3, -3, 6, -6, -3],
            &[2, 4, 1, 7, -2, -1, 6, 3],
        ],
        [
            &[15],
            &[-3, 18, -12, 6, 6, -12, 18, 12],
            &[-2, 2, 2, -6, -6, 2, -8, -2],
        ],
        [
            &[15],
            &[-21, 12, -6, -12, 24, -18, -6, 30],
            &[-14, 8, -4, -8, 16, -12, -4, 20],
        ],
        [
            &[15],
            &[3, 0, 6, 12, 0, 0, 6, 6],
            &[12, 0, -6, -2, -20, 10, 4, -26],
        ],
        [&[0], &[3], &[1, -1, -2, 2, -1, -2, 0, -2]],
        [
            &[15],
            &[-3, 9, -9, -3, 3, -6, 6, 3],
            &[-2, -4, -1, -7, 2, 1, -6, -3],
        ],
        [&[1], &[1, 0, 0, 2, 0, 0, 2, 0], &[0]],
        [
            &[15],
            &[6, -9, 0, 0, -3, 6, 0, -12],
            &[-1, 4, -5, -5, -2, -1, 0, -3],
        ],
        [
            &[15],
            &[9, 6, 6, 12, -18, 6, 6, -6],
            &[6, -6, -6, -2, -2, 4, 4, -14],
        ],
        [
            &[15],
            &[9, 0, -12, 6, 0, 0, 18, -12],
            &[-14, 20, 2, -6, 0, -10, -8, 22],
        ],
        [
            &[15],
            &[-3, 0, -6, -12, 0, 0, -6, -6],
            &[8, 10, -14, 2, -10, 0, 16, -14],
        ],
        [&[1], &[-1, 0, 2, 0, 0, 0, -2, 2], &[0]],
        [&[1], &[-1, 0, 0, -2, 0, 0, -2, 0], &[0]],
        [&[0], &[3], &[2, 1, -1, 1, 1, 2, 0, -1]],
        [
            &[15],
            &[3, 0, 6, 12, 0, 0, 6, 6],
            &[-18, 0, -6, -22, 20, -10, -16, 14],
        ],
        [
            &[15],
            &[3, 3, 0, 0, -9, 3, 0, -6],
            &[-8, 2, 5, -5, 4, -3, -10, 11],
        ],
        [
            &[15],
            &[3, 24, -12, 6, -12, -6, 18, 0],
            &[2, 16, -8, 4, -8, -4, 12, 0],
        ],
        [
            &[15],
            &[-3, 0, -6, -12, 0, 0, -6, -6],
            &[-12, 0, 6, 2, 20, -10, -4, 26],
        ],
        [
            &[15],
            &[9, 0, -12, 6, 0, 0, 18, -12],
            &[16, -10, 2, 14, -10, 10, 12, -18],
        ],
        [
            &[15],
            &[9, 3, -3, 9, -9, 3, 12, -9],
            &[1, 2, -7, 1, 4, -3, 8, -1],
        ],
        [&[1], &[0], &[0]],
        [&[1], &[1, 0, -2, 0, 0, 0, 2, -2], &[0]],
        [
            &[15],
            &[15, 6, -12, 6, -18, 6, 18, -24],
            &[0, -6, 12, 4, -2, 4, -8, 4],
        ],
        [
            &[15],
            &[15, -18, 6, 12, -6, 12, 6, -18],
            &[-10, -2, 4, -12, 6, -2, -16, 8],
        ],
        [
            &[15],
            &[-3, -3, 0, 0, 9, -3, 0, 6],
            &[8, -2, -5, 5, -4, 3, 10, -11],
        ],
        [
            &[15],
            &[-15, 18, -6, -12, 6, -12, -6, 18],
            &[10, 2, -4, 12, -6, 2, 16, -8],
        ],
        [
            &[15],
            &[-3, 0, -6, -12, 0, 0, -6, -6],
            &[-2, -10, -4, -8, 10, 0, -4, -4],
        ],
        [
            &[15],
            &[9, 0, -12, 6, 0, 0, 18, -12],
            &[-4, 10, -8, 4, 10, -10, 12, 12],
        ],
        [
            &[15],
            &[9, 0, -12, 6, 0, 0, 18, -12],
            &[-4, -20, 22, -6, 0, 10, -28, 2],
        ],
        [
            &[15],
            &[21, -12, 6, 12, -24, 18, 6, -30],
            &[14, -8, 4, 8, -16, 12, 4, -20],
        ],
        [
            &[15],
            &[3, 0, 6, 12, 0, 0, 6, 6],
            &[2, 10, 4, 8, -10, 0, 4, 4],
        ],
        [
            &[15],
            &[-9, 0, 12, -6, 0, 0, -18, 12],
            &[4, -10, 8, -4, -10, 10, -12, -12],
        ],
        [
            &[15],
            &[-3, 0, -6, -12, 0, 0, -6, -6],
            &[18, 0, 6, 22, -20, 10, 16, -14],
        ],
        [
            &[15],
            &[-6, 9, 0, 0, 3, -6, 0, 12],
            &[1, -4, 5, 5, 2, 1, 0, 3],
        ],
        [
            &[15],
            &[-9, -6, -6, -12, 18, -6, -6, 6],
            &[-6, 6, 6, 2, 2, -4, -4, 14],
        ],
        [
            &[15],
            &[-9, 0, 12, -6, 0, 0, -18, 12],
            &[-16, 10, -2, -14, 10, -10, -12, 18],
        ],
        [&[0], &[3], &[-2, 1, 2, -2, 1, -3, 0, 2]],
    ];
    from_table(15, &T)
}

/// The G29 reflection arrangement: 40 hyperplanes in C^4 over conductor 4,
/// in defining-polynomial factor order. Coordinates are (u, x, y, z); a
/// coefficient [a, b] means a + b*i.
pub fn g29() -> Arrangement {
    const P: &[i64] = &[1];
    const N: &[i64] = &[-1];
    const I: &[i64] = &[0, 1];
    const J: &[i64] = &[0, -1]; // -i
    const O: &[i64] = &[0];
    const T: [[&[i64]; 4]; 40] = [
        [O, O, O, P],
        [P, N, I, I],
        [P, N, O, O],
        [O, P, N, O],
        [P, N, I, J],
        [O, O, P, P],
        [P, I, N, I],
        [P, N, J, J],
        [P, O, N, O],
        [P, N, J, I],
        [P, J, I, P],
        [P, I, N, J],
        [O, P, O, P],
        [P, J, N, J],
        [P, J, N, I],
        [P, I, J, P],
        [O, O, P, N],
        [P, J, I, N],
        [O, P, O, N],
        [P, I, J, N],
        [O, O, P, O],
        [P, O, O, P],
        [P, I, P, I],
        [P, I, I, P],
        [P, I, I, N],
        [P, O, O, N],
        [P, J, J, P],
        [P, J, P, J],
        [P, J, P, I],
        [O, P, O, O],
        [P, P, I, I],
        [P, P, J, J],
        [P, P, J, I],
        [P, I, P, J],
        [P, J, J, N],
        [P, P, I, J],
        [O, P, P, O],
        [P, O, O, O],
        [P, O, P, O],
        [P, P, O, O],
    ];
    from_table(4, &T)
}

/// The G31 reflection arrangement: 60 hyperplanes in C^4 over conductor 4,
/// in defining-polynomial factor order. Coordinates are (u, x, y, z).
pub fn g31() -> Arrangement {
    const P: &[i64] = &[1];
    const N: &[i64] = &[-1];
    const I: &[i64] = &[0, 1];
    const J: &[i64] = &[0, -1]; // -i
    const O: &[i64] = &[0];
    const T: [[&[i64]; 4]; 60] = [
        [P, O, O, O],
        [P, I, O, O],
        [P, N, O, O],
        [P, P, P, P],
        [O, P, N, O],
        [P, J, O, O],
        [P, P, O, O],
        [P, N, N, N],
        [O, P, O, O],
        [P, N, J, J],
        [P, O, I, O],
        [P, P, J, J],
        [P, O, N, O],
        [P, N, P, P],
        [P, N, I, I],
        [O, P, I, O],
        [O, O, P, P],
        [P, J, N, J],
        [P, P, I, I],
        [P, I, J, P],
        [P, O, J, O],
        [P, O, P, O],
        [O, O, P, O],
        [P, J, P, J],
        [P, P, N, P],
        [P, I, N, I],
        [O, P, J, O],
        [O, P, O, P],
        [P, I, P, I],
        [P, J, I, P],
        [P, P, N, N],
        [P, J, I, N],
        [P, N, P, N],
        [P, I, J, N],
        [P, I, I, N],
        [O, P, P, O],
        [P, N, I, J],
        [P, I, P, J],
        [P, O, O, J],
        [P, I, N, J],
        [P, P, I, J],
        [P, I, I, P],
        [P, O, O, P],
        [P, J, J, P],
        [P, N, N, P],
        [P, J, N, I],
        [P, J, P, I],
        [P, N, J, I],
        [P, J, J, N],
        [O, P, O, J],
        [O, P, O, I],
        [O, O, P, I],
        [P, O, O, I],
        [P, P, J, I],
        [O, O, P, J],
        [P, O, O, N],
        [P, P, P, N],
        [O, P, O, N],
        [O, O, O, P],
        [O, O, P, N],
    ];
    from_table(4, &T)
}

/// Expected shape of one hard-coded entry.
pub struct FixedEntry {
    pub name: &'static str,
    pub hyperplanes: usize,
    pub rank: usize,
    pub conductor: u32,
    pub build: fn() -> Arrangement,
}

/// The hard-coded entries with their expected hyperplane counts, ranks, and
/// conductors.
pub const FIXED_ENTRIES: &[FixedEntry] = &[
    FixedEntry {
        name: "F4",
        hyperplanes: 24,
        rank: 4,
        conductor: 1,
        build: f4,
    },
    FixedEntry {
        name: "H3",
        hyperplanes: 15,
        rank: 3,
        conductor: 5,
        build: h3,
    },
    FixedEntry {
        name: "G24",
        hyperplanes: 21,
        rank: 3,
        conductor: 7,
        build: g24,
    },
    FixedEntry {
        name: "G25",
        hyperplanes: 12,
        rank: 3,
        conductor: 3,
        build: g25,
    },
    FixedEntry {
        name: "G26",
        hyperplanes: 21,
        rank: 3,
        conductor: 3,
        build: g26,
    },
    FixedEntry {
        name: "G27",
        hyperplanes: 45,
        rank: 3,
        conductor: 15,
        build: g27,
    },
    FixedEntry {
        name: "G29",
        hyperplanes: 40,
        rank: 4,
        conductor: 4,
        build: g29,
    },
    FixedEntry {
        name: "G31",
        hyperplanes: 60,
        rank: 4,
        conductor: 4,
        build: g31,
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{
        build_lattice, char_poly, char_poly_from_flats, integer_root_multiset, Bitset,
        IntersectionLattice,
    };

    fn assert_flat(lattice: &IntersectionLattice, n: usize, indices: &[usize], rank: usize) {
        let support = Bitset::from_indices(n, indices.iter().copied());
        let flat = lattice.find(&support);
        assert!(
            flat.is_some_and(|f| f.rank() == rank),
            "expected rank-{rank} flat {indices:?}"
        );
    }

    fn lattice_roots(lattice: &IntersectionLattice) -> Option<Vec<u64>> {
        let flats: Vec<(Bitset, usize)> = lattice
            .all_flats()
            .map(|f| (f.support().clone(), f.rank()))
            .collect();
        integer_root_multiset(&char_poly_from_flats(&flats))
    }

    #[test]
    fn fixed_entries_have_expected_shape() {
        for entry in FIXED_ENTRIES {
            let a = (entry.build)();
            assert_eq!(a.len(), entry.hyperplanes, "{} count", entry.name);
            assert_eq!(a.rank(), entry.rank, "{} rank", entry.name);
            assert_eq!(a.conductor(), entry.conductor, "{} conductor", entry.name);
        }
    }

    #[test]
    fn monomial_counts() {
        // l*(l-1)/2 * r pair forms, plus l coordinate hyperplanes when p != r
        assert_eq!(monomial(3, 3, 3).len(), 9);
        assert_eq!(monomial(4, 4, 3).len(), 12);
        assert_eq!(monomial(2, 2, 4).len(), 12);
        assert_eq!(monomial(4, 2, 3).len(), 15);
        assert_eq!(monomial(2, 1, 3).len(), 9);
        assert_eq!(monomial(1, 1, 4).len(), 6);
        assert_eq!(monomial(1, 1, 4).rank(), 3);
        assert_eq!(monomial(2, 2, 4).rank(), 4);
    }

    #[test]
    fn name_grammar() {
        assert_eq!(
            parse_name("G(4,2,3)").unwrap(),
            Name::Monomial { r: 4, p: 2, l: 3 }
        );
        assert_eq!(
            parse_name("braid:4").unwrap(),
            Name::Monomial { r: 1, p: 1, l: 4 }
        );
        assert_eq!(parse_name("B:3").unwrap(), Name::Monomial { r: 2, p: 1, l: 3 });
        assert_eq!(parse_name("D:4").unwrap(), Name::Monomial { r: 2, p: 2, l: 4 });
        assert_eq!(parse_name("boolean:5").unwrap(), Name::Boolean(5));
        assert_eq!(parse_name("G27").unwrap(), Name::G27);
        assert!(parse_name("G28").is_err());
        assert!(parse_name("G(3,2,3)").is_err());
        assert!(parse_name("braid:0").is_err());
        assert!(parse_name("E8").is_err());
    }

    #[test]
    fn monomial_rank2_flats_for_grr3() {
        // families: A_i = x - zeta^i y, B_i = x - zeta^i z, C_i = y - zeta^i z
        // at indices i, r+i, 2r+i; the rank-2 flats are the three family
        // lines plus the triples {A_i, B_j, C_(j-i)}
        for r in [3usize, 4, 5] {
            let a = monomial(r as u32, r as u32, 3);
            let lattice = build_lattice(&a);
            let stratum = lattice.stratum(2);
            assert_eq!(stratum.len(), 3 + r * r, "G({r},{r},3) rank-2 flat count");
            let mut expected: Vec<Bitset> = Vec::new();
            for family in 0..3 {
                expected.push(Bitset::from_indices(3 * r, family * r..(family + 1) * r));
            }
            for i in 0..r {
                for j in 0..r {
                    let k = (j + r - i) % r;
                    expected.push(Bitset::from_indices(3 * r, [i, r + j, 2 * r + k]));
                }
            }
            for support in &expected {
                let flat = lattice.find(support);
                assert!(
                    flat.is_some_and(|f| f.rank() == 2),
                    "missing rank-2 flat {support:?} in G({r},{r},3)"
                );
            }
            assert_eq!(stratum.len(), expected.len());
        }
    }

    #[test]
    fn char_poly_roots_of_small_members() {
        let expect = [
            ("G(3,3,3)", vec![1, 4, 4]),
            ("G(4,4,3)", vec![1, 5, 6]),
            ("G(5,5,3)", vec![1, 6, 8]),
            ("D:4", vec![1, 3, 3, 5]),
            ("braid:4", vec![1, 2, 3]),
            ("B:3", vec![1, 3, 5]),
            ("G(4,2,3)", vec![1, 5, 9]),
            ("H3", vec![1, 5, 9]),
            ("G25", vec![1, 4, 7]),
            ("G26", vec![1, 7, 13]),
            ("G24", vec![1, 9, 11]),
            ("F4", vec![1, 5, 7, 11]),
        ];
        for (name, roots) in expect {
            let a = build_named(name).unwrap();
            assert_eq!(
                integer_root_multiset(&char_poly(&a)),
                Some(roots),
                "integer roots of {name}"
            );
        }
    }

    #[test]
    fn h3_quoted_double_points() {
        let a = h3();
        let lattice = build_lattice(&a);
        for pair in [[0, 2], [0, 14], [2, 14], [1, 7], [1, 12], [7, 12]] {
            let support = Bitset::from_indices(15, pair);
            let flat = lattice.find(&support);
            assert!(
                flat.is_some_and(|f| f.rank() == 2),
                "expected double point {pair:?}"
            );
        }
    }

    #[test]
    fn g25_quoted_double_points() {
        let a = g25();
        let lattice = build_lattice(&a);
        for pair in [[3, 8], [3, 10], [8, 10], [4, 6], [4, 11], [6, 11]] {
            let support = Bitset::from_indices(12, pair);
            assert!(
                lattice.find(&support).is_some_and(|f| f.rank() == 2),
                "expected double point {pair:?}"
            );
        }
    }

    #[test]
    fn g24_quoted_flats() {
        let a = g24();
        let lattice = build_lattice(&a);
        let quoted: [&[usize]; 12] = [
            &[0, 5, 10, 14],
            &[0, 6, 11, 16],
            &[0, 7, 9, 12],
            &[0, 8, 13, 17],
            &[0, 1, 3],
            &[0, 2, 4],
            &[0, 15, 19],
            &[0, 18, 20],
            &[5, 8, 9],
            &[5, 13, 16],
            &[6, 7, 14],
            &[6, 12, 17],
        ];
        for indices in quoted {
            let support = Bitset::from_indices(21, indices.iter().copied());
            assert!(
                lattice.find(&support).is_some_and(|f| f.rank() == 2),
                "expected rank-2 flat {indices:?}"
            );
        }
    }

    #[test]
    fn g26_quoted_flats() {
        let a = g26();
        let lattice = build_lattice(&a);
        for indices in [[2usize, 4].as_slice(), &[4, 13], &[4, 18], &[4, 20]] {
            let support = Bitset::from_indices(21, indices.iter().copied());
            assert!(
                lattice.find(&support).is_some_and(|f| f.rank() == 2),
                "expected double point {indices:?}"
            );
        }
        let quadruple = Bitset::from_indices(21, [2, 13, 18, 20]);
        assert!(
            lattice.find(&quadruple).is_some_and(|f| f.rank() == 2),
            "expected the quadruple point"
        );
    }

    #[test]
    fn g27_quoted_flats() {
        let a = g27();
        let lattice = build_lattice(&a);
        assert_eq!(lattice_roots(&lattice), Some(vec![1, 19, 25]));
        let quoted: [&[usize]; 25] = [
            &[0, 1, 2, 3, 4],
            &[0, 5, 6, 7, 8],
            &[0, 9, 10, 11, 12],
            &[0, 13, 14, 15, 16],
            &[3, 5, 17],
            &[2, 8, 18],
            &[1, 6, 19],
            &[4, 7, 20],
            &[2, 6, 21],
            &[4, 5, 22],
            &[18, 22, 23],
            &[17, 21, 24],
            &[20, 21, 25],
            &[19, 22, 26],
            &[23, 24, 25, 26],
            &[10, 16, 17],
            &[10, 15, 19],
            &[9, 15, 20],
            &[9, 16, 18],
            &[11, 14, 21],
            &[12, 14, 22],
            &[3, 11, 24],
            &[7, 13, 24],
            &[2, 14, 23],
            &[8, 12, 23],
        ];
        for indices in quoted {
            assert_flat(&lattice, 45, indices, 2);
        }
    }

    #[test]
    fn g29_quoted_flats() {
        let a = g29();
        let lattice = build_lattice(&a);
        assert_eq!(lattice_roots(&lattice), Some(vec![1, 9, 13, 17]));
        for indices in [
            [0usize, 5, 16, 20].as_slice(),
            &[0, 21, 25, 37],
            &[0, 12, 18, 29],
        ] {
            assert_flat(&lattice, 40, indices, 2);
        }
        for pair in [[5usize, 37], [5, 29], [12, 37], [1, 11], [1, 27], [2, 30], [6, 31], [6, 38], [22, 35]]
        {
            assert_flat(&lattice, 40, &pair, 2);
        }
        // each hyperplane from the quoted sixteen forms a double point with
        // at least one member of the A triple (resp. the C triple), which
        // keeps it out of the block containing that triple
        let doubles_a: [usize; 16] = [1, 2, 4, 7, 9, 12, 18, 21, 25, 29, 30, 31, 32, 35, 37, 39];
        let doubles_c: [usize; 16] = [5, 6, 8, 11, 13, 14, 16, 20, 21, 22, 25, 27, 28, 33, 37, 38];
        for (triple, others) in [([5usize, 16, 20], doubles_a), ([12, 18, 29], doubles_c)] {
            for h2 in others {
                let witnessed = triple.iter().any(|&h| {
                    let support = Bitset::from_indices(40, [h, h2]);
                    lattice.find(&support).is_some_and(|f| f.rank() == 2)
                });
                assert!(witnessed, "no double point pairs {h2} with {triple:?}");
            }
        }
        let rank3: [&[usize]; 4] = [
            &[0, 1, 2, 4, 5, 7, 9, 16, 20],
            &[0, 5, 16, 20, 30, 31, 32, 35, 39],
            &[0, 6, 8, 11, 12, 13, 14, 18, 29],
            &[0, 12, 18, 22, 27, 28, 29, 33, 38],
        ];
        for indices in rank3 {
            assert_flat(&lattice, 40, indices, 3);
        }
    }

    #[test]
    fn g31_quoted_flats() {
        let a = g31();
        let lattice = build_lattice(&a);
        assert_eq!(lattice_roots(&lattice), Some(vec![1, 13, 17, 29]));
        for indices in [
            [0usize, 1, 2, 5, 6, 8].as_slice(),
            &[0, 10, 12, 20, 21, 22],
            &[0, 38, 42, 52, 55, 58],
        ] {
            assert_flat(&lattice, 60, indices, 2);
        }
        for pair in [[1usize, 22], [1, 58], [10, 58], [2, 3], [3, 12], [3, 55]] {
            assert_flat(&lattice, 60, &pair, 2);
        }
    }

    #[test]
    fn f4_quoted_flats() {
        let a = f4();
        let lattice = build_lattice(&a);
        let quoted: [&[usize]; 10] = [
            &[0, 1, 4],
            &[0, 5, 7, 13],
            &[0, 9, 11, 19],
            &[0, 12, 14, 21],
            &[1, 7],
            &[1, 11],
            &[1, 12],
            &[5, 19],
            &[5, 21],
            &[9, 21],
        ];
        for indices in quoted {
            let support = Bitset::from_indices(24, indices.iter().copied());
            assert!(
                lattice.find(&support).is_some_and(|f| f.rank() == 2),
                "expected rank-2 flat {indices:?}"
            );
        }
    }
}
