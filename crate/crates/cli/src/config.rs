//! Flat `key=value` configuration files. Keys are the long flag names without
//! dashes; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: [&str; 13] =
    ["suite", "k", "a", "omega", "nmax", "points", "seed", "tol", "report", "format", "convention", "form", "config"];

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("line {}: expected key=value, got {raw:?}", lineno + 1))?;
        let key = key.trim();
        if !KEYS.contains(&key) || key == "config" {
            return Err(format!("line {}: unknown key {key:?}", lineno + 1));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let m = parse("# grid\nk = 2,1,1\n\nomega=3/2  # fixed\n").unwrap();
        assert_eq!(m["k"], "2,1,1");
        assert_eq!(m["omega"], "3/2");
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_bare_words() {
        assert!(parse("kk=1").is_err());
        assert!(parse("nmax").is_err());
    }
}
