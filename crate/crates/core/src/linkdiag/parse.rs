use super::{Diagram, LinkError};

/// Parse `PD[X(a,b,c,d), ...]` (square brackets around the crossing
/// entries also accepted) or the literal `U` for the crossingless unknot.
pub fn parse_pd(text: &str) -> Result<Diagram, LinkError> {
    let mut p = Cursor { s: text.as_bytes(), i: 0 };
    p.skip_ws();
    if p.eat_word("U") {
        p.skip_ws();
        p.expect_end()?;
        return Ok(Diagram::unknot());
    }
    p.expect_word("PD")?;
    p.skip_ws();
    p.expect(b'[')?;
    let mut quads = Vec::new();
    p.skip_ws();
    if !p.peek_is(b']') {
        loop {
            p.skip_ws();
            p.expect_word("X")?;
            p.skip_ws();
            let close = match p.next() {
                Some(b'(') => b')',
                Some(b'[') => b']',
                _ => return Err(p.err_back()),
            };
            let mut q = [0i64; 4];
            for (k, slot) in q.iter_mut().enumerate() {
                p.skip_ws();
                *slot = p.int()?;
                p.skip_ws();
                if k < 3 {
                    p.expect(b',')?;
                }
            }
            p.expect(close)?;
            quads.push(q);
            p.skip_ws();
            if p.peek_is(b',') {
                p.i += 1;
                continue;
            }
            break;
        }
    }
    p.skip_ws();
    p.expect(b']')?;
    p.skip_ws();
    p.expect_end()?;
    if quads.is_empty() {
        return Err(LinkError::MalformedSyntax { offset: 0, token: "PD[]".into() });
    }
    Diagram::from_quads(&quads)
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek_is(&self, c: u8) -> bool {
        self.s.get(self.i) == Some(&c)
    }

    fn next(&mut self) -> Option<u8> {
        let c = self.s.get(self.i).copied();
        self.i += 1;
        c
    }

    fn token_at(&self, at: usize) -> String {
        let end = (at + 8).min(self.s.len());
        String::from_utf8_lossy(&self.s[at.min(end)..end]).into_owned()
    }

    fn err_at(&self, at: usize) -> LinkError {
        let token = self.token_at(at);
        LinkError::MalformedSyntax {
            offset: at,
            token: if token.is_empty() { "<end>".into() } else { token },
        }
    }

    fn err_back(&self) -> LinkError {
        self.err_at(self.i.saturating_sub(1))
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let end = self.i + w.len();
        let fits = self.s.get(self.i..end) == Some(w.as_bytes());
        let boundary = self.s.get(end).is_none_or(|c| !c.is_ascii_alphanumeric());
        if fits && boundary {
            self.i = end;
        }
        fits && boundary
    }

    fn expect_word(&mut self, w: &str) -> Result<(), LinkError> {
        if self.s.get(self.i..self.i + w.len()) == Some(w.as_bytes()) {
            self.i += w.len();
            Ok(())
        } else {
            Err(self.err_at(self.i))
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), LinkError> {
        if self.peek_is(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err_at(self.i))
        }
    }

    fn expect_end(&self) -> Result<(), LinkError> {
        if self.i == self.s.len() {
            Ok(())
        } else {
            Err(self.err_at(self.i))
        }
    }

    fn int(&mut self) -> Result<i64, LinkError> {
        let start = self.i;
        if self.peek_is(b'-') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err_at(start))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_styles_agree() {
        let a = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        let b = parse_pd(" PD[ X(1, 4, 2, 5),X(3,6,4,1) ,X(5,2,6,3) ] ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        for (s, off) in [("PD[X(1,2,3)]", 10), ("QD[]", 0), ("PD[X(1,4,2,5)", 13), ("PD[]", 0), ("U x", 2), ("PD[X(1,a,2,3)]", 7)] {
            match parse_pd(s) {
                Err(LinkError::MalformedSyntax { offset, .. }) => assert_eq!(offset, off, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn mixed_closers_rejected() {
        assert!(matches!(parse_pd("PD[X(1,4,2,5]]"), Err(LinkError::MalformedSyntax { .. })));
    }
}
