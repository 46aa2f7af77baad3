//! Number lists written as `0.5,1,2` or `a:step:b`.

/// A parsed number list; a newtype so clap treats it as one value.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberList(pub Vec<f64>);

/// Parses a comma list or an inclusive range `a:step:b`.
pub fn parse_list(s: &str) -> Result<NumberList, String> {
    parse_values(s).map(NumberList)
}

fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty list".into());
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(parse_number).collect(),
        3 => {
            let a = parse_number(parts[0])?;
            let step = parse_number(parts[1])?;
            let b = parse_number(parts[2])?;
            if !(step > 0.0) {
                return Err(format!("range step must be positive, got {step}"));
            }
            if b < a {
                return Err(format!("range end {b} lies below its start {a}"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            if n > 10_000_000 {
                return Err("range has too many points".into());
            }
            Ok((0..=n).map(|k| tidy(a + k as f64 * step)).collect())
        }
        _ => Err(format!("expected `a,b,c` or `a:step:b`, got `{s}`")),
    }
}

/// Accepts `100000` as well as `1e5`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok(n);
    }
    let v = parse_number(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
        return Err(format!("expected a non-negative integer, got `{s}`"));
    }
    Ok(v as usize)
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: `{}`", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: `{}`", s.trim()))
    }
}

/// Drops the last few ulps of range arithmetic so `0:0.1:0.3` ends at `0.3`.
fn tidy(v: f64) -> f64 {
    format!("{v:.12e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comma_and_range() {
        assert_eq!(parse_list("0.5,1,2").unwrap().0, vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_list("0:0.1:0.3").unwrap().0, vec![0.0, 0.1, 0.2, 0.3]);
        let g = parse_list("-5:0.05:5").unwrap().0;
        assert_eq!(g.len(), 201);
        assert_eq!(g[100], 0.0);
        assert_eq!(g[0], -g[200]);
        assert!(parse_list("1:0:2").is_err());
        assert!(parse_list("1:2").is_err());
        assert!(parse_list("a,b").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e5").unwrap(), 100_000);
        assert_eq!(parse_count("250").unwrap(), 250);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }
}
