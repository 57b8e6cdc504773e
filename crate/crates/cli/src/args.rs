use llt_core::colour::ColourSequence;
use llt_core::lattice::ColComp;
use llt_core::qfield::{int, parse_rat, Rat};

use crate::CliError;

/// Exact rational "p" or "p/r". Decimals are refused so symbolic inputs never pass through floats.
pub fn exact_rat(s: &str) -> Result<Rat, CliError> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(CliError::Usage(format!("{s:?}: give an exact rational p/r")));
    }
    parse_rat(s).ok_or_else(|| CliError::Usage(format!("{s:?} is not a rational")))
}

/// Rational or finite decimal, converted exactly.
pub fn rat_or_decimal(s: &str) -> Result<Rat, CliError> {
    parse_rat(s).ok_or_else(|| CliError::Usage(format!("{s:?} is not a rational or decimal")))
}

pub fn rat_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(exact_rat).collect()
}

pub fn f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{p:?} is not a number"))))
        .collect()
}

pub fn usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("{p:?} is not a count"))))
        .collect()
}

/// Levels separated by ';', entries by ','.
pub fn levels(s: &str) -> Result<Vec<Vec<f64>>, CliError> {
    s.split(';').map(f64_list).collect()
}

pub fn comp(s: &str) -> Result<ColComp, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("{s:?}: {e}")))
}

pub fn colour_word(n: usize, s: &str) -> Result<Vec<usize>, CliError> {
    let c = ColourSequence::parse(n, s).map_err(|e| CliError::Usage(format!("{s:?}: {e}")))?;
    Ok(c.word().to_vec())
}

/// Requires 0 < q < 1.
pub fn unit_interval(q: Rat) -> Result<Rat, CliError> {
    if q > int(0) && q < int(1) {
        Ok(q)
    } else {
        Err(CliError::Usage(format!("q = {q} must lie in (0,1)")))
    }
}
