//! Exact arithmetic on integer powers of `1 + delta`.
//!
//! A rounded value is either zero or `(1 + delta)^j`. Powers are kept as exact
//! big-integer fractions; a floating-point logarithm only seeds the exponent
//! search in [`oplus`] and every answer is confirmed by exact comparison.

use std::sync::RwLock;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = Ratio<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rounded {
    Zero,
    Power(u32),
}

/// Operand of `⊕`: leaves and edge lengths are plain integers, computed
/// values are rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(u64),
    Rounded(Rounded),
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x)
    }
}

impl From<Rounded> for Value {
    fn from(x: Rounded) -> Self {
        Value::Rounded(x)
    }
}

/// Memoized exact powers of `1 + delta = num / den`.
#[derive(Debug)]
pub struct PowerTable {
    delta: Rational,
    num: u64,
    den: u64,
    ln_base: f64,
    powers: RwLock<(Vec<BigUint>, Vec<BigUint>)>,
}

impl PowerTable {
    pub fn new(delta: Rational) -> Self {
        assert!(*delta.numer() > 0, "delta must be positive");
        let num = delta.denom() + delta.numer();
        let den = *delta.denom();
        PowerTable {
            delta,
            num,
            den,
            ln_base: (1.0 + delta.to_f64().unwrap_or(0.0)).ln(),
            powers: RwLock::new((vec![BigUint::one()], vec![BigUint::one()])),
        }
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    /// `(1 + delta)^j` as `(numerator, denominator)`.
    pub fn power(&self, j: u32) -> (BigUint, BigUint) {
        let j = j as usize;
        {
            let guard = self.powers.read().unwrap();
            if j < guard.0.len() {
                return (guard.0[j].clone(), guard.1[j].clone());
            }
        }
        let mut guard = self.powers.write().unwrap();
        while guard.0.len() <= j {
            let p = guard.0.last().unwrap() * self.num;
            let q = guard.1.last().unwrap() * self.den;
            guard.0.push(p);
            guard.1.push(q);
        }
        (guard.0[j].clone(), guard.1[j].clone())
    }

    /// Exact value of an operand as a fraction.
    pub fn fraction(&self, x: Value) -> (BigUint, BigUint) {
        match x {
            Value::Int(v) => (BigUint::from(v), BigUint::one()),
            Value::Rounded(Rounded::Zero) => (BigUint::zero(), BigUint::one()),
            Value::Rounded(Rounded::Power(j)) => self.power(j),
        }
    }

    /// Whether `(1 + delta)^j >= num / den`.
    fn power_at_least(&self, j: u32, num: &BigUint, den: &BigUint) -> bool {
        let (p, q) = self.power(j);
        p * den >= num * q
    }

    /// Least `j >= 0` with `(1 + delta)^j >= num / den`; requires a positive fraction.
    pub fn ceil_log(&self, num: &BigUint, den: &BigUint) -> u32 {
        let estimate = (ln_big(num) - ln_big(den)) / self.ln_base;
        let mut j = if estimate.is_finite() && estimate > 0.0 {
            estimate.ceil().min(u32::MAX as f64 / 2.0) as u32
        } else {
            0
        };
        while !self.power_at_least(j, num, den) {
            j += 1;
        }
        while j > 0 && self.power_at_least(j - 1, num, den) {
            j -= 1;
        }
        j
    }

    pub fn to_f64(&self, x: Value) -> f64 {
        match x {
            Value::Int(v) => v as f64,
            Value::Rounded(Rounded::Zero) => 0.0,
            Value::Rounded(Rounded::Power(j)) => (j as f64 * self.ln_base).exp(),
        }
    }
}

/// Natural logarithm of a big integer, accurate to f64 precision.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a ⊕ b`: zero when both are zero, otherwise `a + b` rounded up to the
/// next integer power of `1 + delta`.
pub fn oplus(a: Value, b: Value, table: &PowerTable) -> Rounded {
    let (an, ad) = table.fraction(a);
    let (bn, bd) = table.fraction(b);
    let num = &an * &bd + &bn * &ad;
    if num.is_zero() {
        return Rounded::Zero;
    }
    let den = ad * bd;
    Rounded::Power(table.ceil_log(&num, &den))
}

/// Rounding parameter for a decomposition of height `height`.
///
/// The default is `eps / (4 height + 2)`: computed distances come from
/// addition trees of height up to `2 height`, and the error bound needs
/// `delta < eps / (2 * tree height)`. `literal` selects `eps / (2 height + 1)`.
pub fn choose_delta(epsilon: Rational, height: u64, literal: bool) -> Rational {
    let height = height.max(1);
    let divisor = if literal { 2 * height + 1 } else { 4 * height + 2 };
    epsilon / divisor
}

/// Index into a [`ColorAlphabet`]: 0 is zero, larger indices are the listed
/// nonzero magnitudes in increasing order.
pub type Magnitude = u16;

#[derive(Debug)]
enum Scale {
    /// Magnitude `m >= 1` is `(1 + delta)^(m - 1)`.
    Powers(PowerTable),
    /// Magnitude `m` is the integer `m`.
    Integers,
}

/// The distance values a bag vertex may be colored with at radius `r`.
#[derive(Debug)]
pub struct ColorAlphabet {
    epsilon: Rational,
    r: u64,
    len: usize,
    scale: Scale,
    /// Per magnitude `i`: largest integer `s` with `s + 2i <= (1 + eps) 2r`.
    satisfy_budget: Vec<Option<u64>>,
}

impl ColorAlphabet {
    /// Powers of `1 + delta` up to `(1 + eps) r`, plus zero.
    pub fn approximate(epsilon: Rational, delta: Rational, r: u64) -> Self {
        assert!(r >= 1, "radius must be positive");
        let table = PowerTable::new(delta);
        let (pe, qe) = (BigUint::from(*epsilon.numer()), BigUint::from(*epsilon.denom()));
        // (1+eps) r = cap_num / qe
        let cap_num = (&pe + &qe) * BigUint::from(r);
        let mut count = 0u32;
        loop {
            let (p, q) = table.power(count);
            if p * &qe > &cap_num * q {
                break;
            }
            count += 1;
        }
        let len = count as usize + 1;
        let two_r_cap = BigUint::from(2u32) * &cap_num;
        let satisfy_budget = (0..len)
            .map(|m| {
                if m == 0 {
                    return (&two_r_cap / &qe).to_u64();
                }
                let (p, q) = table.power(m as u32 - 1);
                // floor(((pe+qe) 2r q - 2 qe p) / (qe q))
                let lhs = &two_r_cap * &q;
                let rhs = BigUint::from(2u32) * &qe * p;
                if lhs < rhs {
                    None
                } else {
                    ((lhs - rhs) / (&qe * q)).to_u64()
                }
            })
            .collect();
        ColorAlphabet {
            epsilon,
            r,
            len,
            scale: Scale::Powers(table),
            satisfy_budget,
        }
    }

    /// Integer distances `0..=r`; satisfaction is checked against `2r`.
    pub fn exact(r: u64) -> Self {
        let len = r as usize + 1;
        let satisfy_budget = (0..len as u64).map(|i| (2 * r).checked_sub(2 * i)).collect();
        ColorAlphabet {
            epsilon: Rational::from_integer(0),
            r,
            len,
            scale: Scale::Integers,
            satisfy_budget,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn delta(&self) -> Option<Rational> {
        match &self.scale {
            Scale::Powers(t) => Some(t.delta()),
            Scale::Integers => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.scale, Scale::Integers)
    }

    pub fn rounded(&self, m: Magnitude) -> Value {
        match (&self.scale, m) {
            (_, 0) => Value::Rounded(Rounded::Zero),
            (Scale::Powers(_), m) => Value::Rounded(Rounded::Power(m as u32 - 1)),
            (Scale::Integers, m) => Value::Int(m as u64),
        }
    }

    /// Exact value of magnitude `m` as `(numerator, denominator)`.
    pub fn fraction(&self, m: Magnitude) -> (BigUint, BigUint) {
        match &self.scale {
            Scale::Powers(t) => t.fraction(self.rounded(m)),
            Scale::Integers => (BigUint::from(m), BigUint::one()),
        }
    }

    pub fn to_f64(&self, m: Magnitude) -> f64 {
        match &self.scale {
            Scale::Powers(t) => t.to_f64(self.rounded(m)),
            Scale::Integers => m as f64,
        }
    }

    /// Whether the integer `x` is at most the value of magnitude `m`.
    pub fn int_at_most(&self, x: u64, m: Magnitude) -> bool {
        let (p, q) = self.fraction(m);
        BigUint::from(x) * q <= p
    }

    /// Largest integer `s` with `s + 2 value(m) <= (1 + eps) 2r`.
    pub fn satisfy_budget(&self, m: Magnitude) -> Option<u64> {
        self.satisfy_budget[m as usize]
    }

    /// Largest integer routing cost accepted as serving a demand:
    /// `floor((1 + eps) 2r)`.
    pub fn serve_bound(&self) -> u64 {
        self.satisfy_budget[0].expect("zero magnitude always has a budget")
    }

    /// `d ⊕ value(m)` for every magnitude `m`, as magnitudes of this alphabet;
    /// `None` marks results beyond the alphabet's cap.
    pub fn oplus_row(&self, d: u64) -> Vec<Option<Magnitude>> {
        match &self.scale {
            Scale::Integers => (0..self.len as u64)
                .map(|m| {
                    let s = d + m;
                    (s < self.len as u64).then_some(s as Magnitude)
                })
                .collect(),
            Scale::Powers(table) => {
                let mut out = Vec::with_capacity(self.len);
                let mut cursor: usize = 0;
                for m in 0..self.len {
                    let (pm, qm) = self.fraction(m as Magnitude);
                    let num = BigUint::from(d) * &qm + pm;
                    if num.is_zero() {
                        out.push(Some(0));
                        continue;
                    }
                    cursor = cursor.max(1);
                    // results are nondecreasing in m; advance past powers below the sum
                    while cursor < self.len {
                        let (p, q) = table.power(cursor as u32 - 1);
                        if p * &qm >= &num * q {
                            break;
                        }
                        cursor += 1;
                    }
                    out.push((cursor < self.len).then_some(cursor as Magnitude));
                }
                out
            }
        }
    }
}

/// Full binary tree with non-negative integer leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdditionTree {
    Leaf(u64),
    Node(Box<AdditionTree>, Box<AdditionTree>),
}

impl AdditionTree {
    pub fn node(left: AdditionTree, right: AdditionTree) -> Self {
        AdditionTree::Node(Box::new(left), Box::new(right))
    }

    pub fn height(&self) -> usize {
        match self {
            AdditionTree::Leaf(_) => 0,
            AdditionTree::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    /// Exact and approximate value of every node, in postorder; the root is last.
    pub fn evaluate_all(&self, table: &PowerTable) -> Vec<(u64, Value)> {
        let mut out = Vec::new();
        self.eval_into(table, &mut out);
        out
    }

    fn eval_into(&self, table: &PowerTable, out: &mut Vec<(u64, Value)>) -> (u64, Value) {
        let res = match self {
            AdditionTree::Leaf(x) => (*x, Value::Int(*x)),
            AdditionTree::Node(l, r) => {
                let (ly, lz) = l.eval_into(table, out);
                let (ry, rz) = r.eval_into(table, out);
                (ly + ry, Value::Rounded(oplus(lz, rz, table)))
            }
        };
        out.push(res);
        res
    }
}

/// Root value of an addition tree and its approximate counterpart.
pub fn approx_tree_eval(tree: &AdditionTree, table: &PowerTable) -> (u64, Value) {
    *tree.evaluate_all(table).last().expect("tree has a root")
}

/// Parses a positive rational written as `P/Q`, an integer or a decimal.
/// Decimals are converted exactly, so `0.25` becomes `1/4`.
pub fn parse_rational(s: &str) -> crate::error::Result<Rational> {
    let s = s.trim();
    let bad =
        || crate::error::Error::InvalidParameter(format!("'{s}' is not a positive rational (use P/Q or a decimal)"));
    let q = if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Rational::new(p, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac.parse::<u64>().ok()?))
            .ok_or_else(bad)?;
        Rational::new(num, den)
    } else {
        Rational::from_integer(s.parse().map_err(|_| bad())?)
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(q)
}
