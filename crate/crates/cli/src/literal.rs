//! Parsing of the polygon and cocharacter literals taken on the command line.

use std::str::FromStr;

use newton_strata::polygon::DominantCocharacter;
use newton_strata::{ConcavePolygon, MinusculeCocharacter};

/// Parses a concave polygon literal such as `2/3^3,3/5^5`.
pub fn parse_polygon(input: &str) -> Result<ConcavePolygon, String> {
    ConcavePolygon::from_str(input).map_err(|e| format!("{input:?}: {e}"))
}

/// Parses a cocharacter argument.
///
/// Accepts the shorthand `min:<n>:<d>` for the standard minuscule
/// cocharacter of rank n and degree d, as well as the general dominant
/// forms `2,2,1,1` and `1^4,0^4`.
pub fn parse_cocharacter(input: &str) -> Result<DominantCocharacter, String> {
    if let Some(rest) = input.strip_prefix("min:") {
        let (n, d) = rest
            .split_once(':')
            .ok_or_else(|| format!("{input:?}: expected min:<n>:<d>"))?;
        let n: usize = n.parse().map_err(|_| format!("{input:?}: bad rank {n:?}"))?;
        let d: i64 = d.parse().map_err(|_| format!("{input:?}: bad degree {d:?}"))?;
        let mu = MinusculeCocharacter::new(n, d)
            .map_err(|e| format!("{input:?}: {e}"))?;
        return Ok(mu.to_dominant());
    }
    DominantCocharacter::from_str(input).map_err(|e| format!("{input:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minuscule_shorthand() {
        let mu = parse_cocharacter("min:8:4").unwrap();
        assert_eq!(mu.rank(), 8);
        assert_eq!(mu.degree(), 4);
        assert!(mu.is_minuscule());
    }

    #[test]
    fn shorthand_rejects_overfull_degree() {
        assert!(parse_cocharacter("min:2:5").is_err());
    }

    #[test]
    fn tuple_and_run_forms_agree() {
        assert_eq!(
            parse_cocharacter("2,2,1,1").unwrap(),
            parse_cocharacter("2^2,1^2").unwrap()
        );
    }

    #[test]
    fn polygon_errors_carry_the_input() {
        let err = parse_polygon("3,oops").unwrap_err();
        assert!(err.contains("oops"));
    }
}
