//! The five q-polynomial families, their classical counterparts, and the
//! Legendre/Jacobi/Laguerre/Charlier polynomials used by the connection and
//! corollary identities.
//!
//! Quantities such as `q^((1+z)/2)` are passed as independent rationals
//! (`a`, `Z`, `mu`, `b`, `L`) rather than computed from a real exponent; the
//! polynomials only ever use them as Pochhammer bases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hyper::{f_eval_scalar, phi_eval_scalar, Argument, HyperSpec, ParamAtom, PhiSpec, DEFAULT_GUARD};
use crate::numerics::{parse_rational, Rational};
use crate::qcore::{q_binomial, qpoch_scalar, QBase};

/// Named rational parameters: `p`, `z`, `a`, `Z`, `L`, `mu`, `b`, `lambda`,
/// and integer-valued `m`, `j`, `s`, `n`, `l`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamBinding {
    values: BTreeMap<String, Rational>,
}

impl ParamBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: Rational) {
        self.values.insert(name.to_string(), value);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn rational(&self, name: &str) -> Result<&Rational> {
        self.get(name).ok_or_else(|| Error::MissingParam(name.to_string()))
    }

    pub fn integer(&self, name: &str) -> Result<i64> {
        let v = self.rational(name)?;
        if !v.is_integer() {
            return Err(invalid(name, "must be an integer"));
        }
        v.numer().to_i64().ok_or_else(|| invalid(name, "integer out of range"))
    }

    pub fn natural(&self, name: &str) -> Result<usize> {
        let v = self.integer(name)?;
        usize::try_from(v).map_err(|_| invalid(name, "must be a nonnegative integer"))
    }

    /// The base from `p`, or from `q` when only that is bound.
    pub fn base(&self) -> Result<QBase> {
        match (self.get("p"), self.get("q")) {
            (Some(p), _) => QBase::new(p.clone()),
            (None, Some(q)) => QBase::from_q(q.clone()),
            (None, None) => Err(Error::MissingParam("p".to_string())),
        }
    }

    /// Parses `name=value` with an exact rational value.
    pub fn parse_assignment(text: &str) -> Result<(String, Rational)> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| Error::MalformedRational(text.to_string()))?;
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(invalid(name, "parameter names are alphanumeric"));
        }
        Ok((name.to_string(), parse_rational(value)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Name to canonical rational text, sorted by name.
    pub fn to_text_map(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }
}

impl fmt::Display for ParamBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidParam { name: name.to_string(), reason: reason.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    QBatemanZ,
    QBateman,
    QPasternack,
    QSylvester,
    QCesaro,
    BatemanZ,
    Bateman,
    Pasternack,
    Sylvester,
    Cesaro,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::QBatemanZ,
        FamilyId::QBateman,
        FamilyId::QPasternack,
        FamilyId::QSylvester,
        FamilyId::QCesaro,
        FamilyId::BatemanZ,
        FamilyId::Bateman,
        FamilyId::Pasternack,
        FamilyId::Sylvester,
        FamilyId::Cesaro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::QBatemanZ => "q-batemanz",
            FamilyId::QBateman => "q-bateman",
            FamilyId::QPasternack => "q-pasternack",
            FamilyId::QSylvester => "q-sylvester",
            FamilyId::QCesaro => "q-cesaro",
            FamilyId::BatemanZ => "classical-batemanz",
            FamilyId::Bateman => "classical-bateman",
            FamilyId::Pasternack => "classical-pasternack",
            FamilyId::Sylvester => "classical-sylvester",
            FamilyId::Cesaro => "classical-cesaro",
        }
    }

    pub fn is_q(self) -> bool {
        matches!(
            self,
            FamilyId::QBatemanZ | FamilyId::QBateman | FamilyId::QPasternack | FamilyId::QSylvester | FamilyId::QCesaro
        )
    }

    /// Parameter names read from the binding (besides the base).
    pub fn params(self) -> &'static [&'static str] {
        match self {
            FamilyId::QBatemanZ | FamilyId::BatemanZ | FamilyId::Bateman | FamilyId::Sylvester => &["z"],
            FamilyId::QBateman => &["a"],
            FamilyId::QPasternack => &["mu", "b"],
            FamilyId::QSylvester => &["z", "Z"],
            FamilyId::QCesaro | FamilyId::Cesaro => &["s", "z"],
            FamilyId::Pasternack => &["m", "z"],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// The defining basic hypergeometric series of a q-family at degree `n`,
/// together with its scalar prefactor.
pub fn q_family_spec(family: FamilyId, n: usize, binding: &ParamBinding) -> Result<(Rational, PhiSpec)> {
    let base = binding.base()?;
    let ni = n as i64;
    let one = Rational::from(1);
    let q = base.q().clone();
    let qn = base.q_pow(ni);
    let top = || vec![ParamAtom::Scalar(base.q_pow(-ni)), ParamAtom::Scalar(base.q_pow(ni + 1))];
    use ParamAtom::Scalar;
    let spec = match family {
        FamilyId::QBatemanZ => {
            let z = binding.rational("z")?;
            let arg = Argument::Scalar(qn * z);
            (one, PhiSpec::new(top(), vec![Scalar(q.clone()), Scalar(q)], arg, base))
        }
        FamilyId::QBateman => {
            let mut num = top();
            num.push(Scalar(binding.rational("a")?.clone()));
            (one, PhiSpec::new(num, vec![Scalar(q.clone()), Scalar(q)], Argument::Scalar(qn), base))
        }
        FamilyId::QPasternack => {
            let mut num = top();
            num.push(Scalar(binding.rational("b")?.clone()));
            let mu = binding.rational("mu")?.clone();
            (one, PhiSpec::new(num, vec![Scalar(q), Scalar(mu)], Argument::Scalar(qn), base))
        }
        FamilyId::QSylvester => {
            let z = binding.rational("z")?;
            if *z == 0 {
                return Err(invalid("z", "the q-Sylvester polynomial is undefined at z = 0"));
            }
            let zz = binding.rational("Z")?.clone();
            let prefactor = crate::qcore::pow_i64(z, ni) / qpoch_scalar(&q, n, &base);
            let num = vec![Scalar(base.q_pow(-ni)), Scalar(zz)];
            (prefactor, PhiSpec::new(num, vec![], Argument::Scalar(qn / z), base))
        }
        FamilyId::QCesaro => {
            let s = binding.natural("s")? as i64;
            let z = binding.rational("z")?.clone();
            let prefactor = qpoch_scalar(&base.q_pow(s + 1), n, &base) / qpoch_scalar(&q, n, &base);
            let num = vec![Scalar(base.q_pow(-ni)), Scalar(q)];
            let den = vec![Scalar(base.q_pow(-s - ni))];
            (prefactor, PhiSpec::new(num, den, Argument::Scalar(z), base))
        }
        other => return Err(Error::UnknownFamily(format!("{other} is not a q-family"))),
    };
    Ok(spec)
}

/// Exact value of a q-family polynomial at degree `n`.
pub fn q_family_value(family: FamilyId, n: usize, binding: &ParamBinding) -> Result<Rational> {
    let (prefactor, spec) = q_family_spec(family, n, binding)?;
    Ok(prefactor * phi_eval_scalar(&spec, DEFAULT_GUARD.max(n))?)
}

fn family_binding(base: &QBase, pairs: &[(&str, &Rational)]) -> Result<ParamBinding> {
    let mut b = match base.p() {
        Ok(p) => ParamBinding::new().with("p", p.clone()),
        Err(_) => ParamBinding::new().with("q", base.q().clone()),
    };
    for (k, v) in pairs {
        b.set(k, (*v).clone());
    }
    Ok(b)
}

pub fn q_bateman_z(n: usize, z: &Rational, base: &QBase) -> Result<Rational> {
    q_family_value(FamilyId::QBatemanZ, n, &family_binding(base, &[("z", z)])?)
}

/// q-Bateman polynomial with `a = q^((1+z)/2)`.
pub fn q_bateman(n: usize, a: &Rational, base: &QBase) -> Result<Rational> {
    q_family_value(FamilyId::QBateman, n, &family_binding(base, &[("a", a)])?)
}

/// q-Pasternack polynomial with `mu = q^(m+1)` and `b = q^((1+z+m)/2)`.
pub fn q_pasternack(n: usize, mu: &Rational, b: &Rational, base: &QBase) -> Result<Rational> {
    q_family_value(FamilyId::QPasternack, n, &family_binding(base, &[("mu", mu), ("b", b)])?)
}

/// q-Sylvester polynomial with `zq = q^z`.
pub fn q_sylvester(n: usize, z: &Rational, zq: &Rational, base: &QBase) -> Result<Rational> {
    q_family_value(FamilyId::QSylvester, n, &family_binding(base, &[("z", z), ("Z", zq)])?)
}

pub fn q_cesaro(n: usize, s: u64, z: &Rational, base: &QBase) -> Result<Rational> {
    let s = Rational::from(s);
    q_family_value(FamilyId::QCesaro, n, &family_binding(base, &[("s", &s), ("z", z)])?)
}

/// Which `q`-power balances the `3phi2` when a Pasternack polynomial of
/// degree `m` is sampled on the lattice `z = -2n-1-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeArgument {
    /// Argument `q^n`, tied to the lattice index. The generating functions in
    /// the lattice variable hold for this form.
    LatticeIndex,
    /// Argument `q^m`, the plain polynomial definition at `z = -2n-1-j`.
    Degree,
}

/// `B^j_m(-2n-1-j; q)`: the `3phi2(q^-m, q^(m+1), q^-n; q, q^(j+1); q, x)`
/// with `x` chosen by `argument`.
pub fn q_pasternack_lattice(m: usize, j: usize, n: usize, argument: LatticeArgument, base: &QBase) -> Result<Rational> {
    let (mi, ni) = (m as i64, n as i64);
    let x = match argument {
        LatticeArgument::LatticeIndex => base.q_pow(ni),
        LatticeArgument::Degree => base.q_pow(mi),
    };
    let spec = PhiSpec::new(
        vec![
            ParamAtom::Scalar(base.q_pow(-mi)),
            ParamAtom::Scalar(base.q_pow(mi + 1)),
            ParamAtom::Scalar(base.q_pow(-ni)),
        ],
        vec![ParamAtom::Scalar(base.q().clone()), ParamAtom::Scalar(base.q_pow(j as i64 + 1))],
        Argument::Scalar(x),
        base.clone(),
    );
    phi_eval_scalar(&spec, DEFAULT_GUARD.max(m))
}

/// `sum_(k=0..n) [k+s choose s]_q (z q^s)^(n-k)`.
pub fn cesaro_closed_form(n: usize, s: u64, z: &Rational, base: &QBase) -> Result<Rational> {
    let zqs = z * base.q_pow(s as i64);
    let mut sum = Rational::new();
    for k in 0..=n {
        let w = q_binomial(k as u64 + s, s, base)?;
        sum += w * crate::qcore::pow_i64(&zqs, (n - k) as i64);
    }
    Ok(sum)
}

pub fn rising(a: &Rational, k: usize) -> Rational {
    (0..k as u64).fold(Rational::from(1), |acc, i| acc * Rational::from(a + i))
}

pub fn factorial(k: usize) -> Rational {
    (1..=k as u64).fold(Rational::from(1), |acc, i| acc * i)
}

fn r(v: i64) -> Rational {
    Rational::from(v)
}

/// Exact value of a classical family polynomial at degree `n`.
pub fn classical_family_value(family: FamilyId, n: usize, binding: &ParamBinding) -> Result<Rational> {
    let nn = r(-(n as i64));
    let n1 = r(n as i64 + 1);
    let one = Rational::from(1);
    match family {
        FamilyId::BatemanZ => {
            let z = binding.rational("z")?;
            f_eval_scalar(&HyperSpec::new(vec![nn, n1], vec![one.clone(), one]), z, DEFAULT_GUARD.max(n))
        }
        FamilyId::Bateman => {
            let z = binding.rational("z")?;
            let c = Rational::from(z + 1u32) / 2u32;
            f_eval_scalar(&HyperSpec::new(vec![nn, n1, c], vec![one.clone(), one.clone()]), &one, DEFAULT_GUARD.max(n))
        }
        FamilyId::Pasternack => {
            let z = binding.rational("z")?;
            let m = binding.rational("m")?;
            if *m == -1 {
                return Err(invalid("m", "the Pasternack polynomial needs m != -1"));
            }
            let c = (Rational::from(z + m) + 1u32) / 2u32;
            let m1 = Rational::from(m + 1u32);
            f_eval_scalar(&HyperSpec::new(vec![nn, n1, c], vec![one.clone(), m1]), &one, DEFAULT_GUARD.max(n))
        }
        FamilyId::Sylvester => {
            let z = binding.rational("z")?;
            if *z == 0 {
                return Err(invalid("z", "the Sylvester polynomial is undefined at z = 0"));
            }
            let x = -Rational::from(z.recip_ref());
            let sum = f_eval_scalar(&HyperSpec::new(vec![nn, z.clone()], vec![]), &x, DEFAULT_GUARD.max(n))?;
            Ok(crate::qcore::pow_i64(z, n as i64) / factorial(n) * sum)
        }
        FamilyId::Cesaro => {
            let s = binding.natural("s")? as i64;
            let z = binding.rational("z")?;
            let prefactor = rising(&r(1 + s), n) / factorial(n);
            let spec = HyperSpec::new(vec![nn, one], vec![r(-s - n as i64)]);
            Ok(prefactor * f_eval_scalar(&spec, z, DEFAULT_GUARD.max(n))?)
        }
        other => Err(Error::UnknownFamily(format!("{other} is not a classical family"))),
    }
}

/// Evaluates any family, q or classical.
pub fn family_value(family: FamilyId, n: usize, binding: &ParamBinding) -> Result<Rational> {
    if family.is_q() {
        q_family_value(family, n, binding)
    } else {
        classical_family_value(family, n, binding)
    }
}

pub fn bateman_z(n: usize, z: &Rational) -> Result<Rational> {
    classical_family_value(FamilyId::BatemanZ, n, &ParamBinding::new().with("z", z.clone()))
}

pub fn bateman(n: usize, z: &Rational) -> Result<Rational> {
    classical_family_value(FamilyId::Bateman, n, &ParamBinding::new().with("z", z.clone()))
}

pub fn pasternack(n: usize, m: &Rational, z: &Rational) -> Result<Rational> {
    let b = ParamBinding::new().with("m", m.clone()).with("z", z.clone());
    classical_family_value(FamilyId::Pasternack, n, &b)
}

pub fn sylvester(n: usize, z: &Rational) -> Result<Rational> {
    classical_family_value(FamilyId::Sylvester, n, &ParamBinding::new().with("z", z.clone()))
}

pub fn cesaro(n: usize, s: u64, z: &Rational) -> Result<Rational> {
    let b = ParamBinding::new().with("s", Rational::from(s)).with("z", z.clone());
    classical_family_value(FamilyId::Cesaro, n, &b)
}

/// Classical orthogonal polynomials used by the connection formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrthPoly {
    Legendre,
    Jacobi { alpha: Rational, beta: Rational },
    Laguerre { alpha: Rational },
    Charlier { a: Rational },
}

pub fn orth_value(kind: &OrthPoly, n: usize, x: &Rational) -> Result<Rational> {
    match kind {
        OrthPoly::Legendre => {
            let (mut prev, mut cur) = (Rational::from(1), x.clone());
            if n == 0 {
                return Ok(prev);
            }
            for k in 1..n as u64 {
                // (k+1) P_(k+1) = (2k+1) x P_k - k P_(k-1)
                let next = (Rational::from(x * &cur) * (2 * k + 1) - prev * k) / (k + 1);
                prev = std::mem::replace(&mut cur, next);
            }
            Ok(cur)
        }
        OrthPoly::Jacobi { alpha, beta } => {
            let a1 = Rational::from(alpha + 1u32);
            let upper = Rational::from(alpha + beta) + (n as u64 + 1);
            let arg = Rational::from(1 - x) / 2u32;
            let spec = HyperSpec::new(vec![r(-(n as i64)), upper], vec![a1.clone()]);
            Ok(rising(&a1, n) / factorial(n) * f_eval_scalar(&spec, &arg, DEFAULT_GUARD.max(n))?)
        }
        OrthPoly::Laguerre { alpha } => {
            let mut sum = Rational::new();
            for k in 0..=n {
                let c = rising(&(Rational::from(alpha + 1u32) + k as u64), n - k) / factorial(n - k);
                let term = c * crate::qcore::pow_i64(x, k as i64) / factorial(k);
                if k % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            Ok(sum)
        }
        OrthPoly::Charlier { a } => {
            if *a == 0 {
                return Err(invalid("a", "Charlier polynomials need a != 0"));
            }
            let spec = HyperSpec::new(vec![r(-(n as i64)), -x.clone()], vec![]);
            f_eval_scalar(&spec, &(-Rational::from(a.recip_ref())), DEFAULT_GUARD.max(n))
        }
    }
}

/// Monomial coefficients of the Legendre polynomial `P_m`.
pub fn legendre_polynomial(m: usize) -> Vec<Rational> {
    let mut prev = vec![Rational::from(1)];
    if m == 0 {
        return prev;
    }
    let mut cur = vec![Rational::new(), Rational::from(1)];
    for k in 1..m as u64 {
        let mut next = vec![Rational::new(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += Rational::from(c * (2 * k + 1)) / (k + 1);
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= Rational::from(c * k) / (k + 1);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}
