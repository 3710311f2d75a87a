//! Quote files: `day,type,expiry_months,delta,implied_vol`, one row per
//! quote, `type` being `C` or `P`.

use std::collections::BTreeMap;
use std::path::Path;

use lsabr_core::calibration::{MarketQuote, Moneyness, OptionType, QuoteDay};

use crate::error::{CliError, Result};

const HEADER: [&str; 5] = ["day", "type", "expiry_months", "delta", "implied_vol"];

pub fn read_quotes(path: &Path) -> Result<Vec<QuoteDay>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    parse_quotes(file, path)
}

pub fn parse_quotes(input: impl std::io::Read, path: &Path) -> Result<Vec<QuoteDay>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let bad = |line: u64, message: String| CliError::Input {
        path: path.to_path_buf(),
        line,
        message,
    };
    let headers = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if headers.iter().ne(HEADER) {
        return Err(bad(1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut days: BTreeMap<usize, Vec<MarketQuote>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(bad(
                line,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let field = |k: usize| -> Result<f64> {
            record[k]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(line, format!("{}: `{}` is not a number", HEADER[k], &record[k])))
        };
        let day: usize = record[0]
            .parse()
            .map_err(|_| bad(line, format!("day: `{}` is not a day index", &record[0])))?;
        let option_type = match &record[1] {
            "C" | "c" => OptionType::Call,
            "P" | "p" => OptionType::Put,
            other => return Err(bad(line, format!("type: `{other}` is neither C nor P"))),
        };
        let months = field(2)?;
        let delta = field(3)?;
        let vol = field(4)?;
        if months <= 0.0 {
            return Err(bad(line, format!("expiry_months must be positive, got {months}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(bad(line, format!("delta must lie in (0, 1), got {delta}")));
        }
        if vol <= 0.0 {
            return Err(bad(line, format!("implied_vol must be positive, got {vol}")));
        }
        days.entry(day).or_default().push(MarketQuote {
            option_type,
            expiry: months / 12.0,
            moneyness: Moneyness::Delta(delta),
            implied_vol: vol,
        });
    }
    if days.is_empty() {
        return Err(bad(1, "no quotes".into()));
    }
    Ok(days.into_iter().map(|(day, quotes)| QuoteDay { day, quotes }).collect())
}
