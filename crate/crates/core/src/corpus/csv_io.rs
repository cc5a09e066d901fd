use std::io::{Read, Write};

use csv::{ByteRecord, ReaderBuilder, Terminator, WriterBuilder};

use super::{Post, PredictionRecord, SpanSet};
use crate::error::{Error, Result};

const ID_COLUMNS: &[&str] = &["id", "text_id", "post_id"];

struct Columns {
    spans: usize,
    text: Option<usize>,
    id: Option<usize>,
}

fn utf8_field<'a>(record: &'a ByteRecord, idx: usize, row: u64, source: &str) -> Result<&'a str> {
    let bytes = record.get(idx).ok_or_else(|| Error::Csv {
        row,
        message: format!("missing column {}", idx + 1),
    })?;
    std::str::from_utf8(bytes).map_err(|_| Error::NonUtf8 {
        source_name: source.to_string(),
        line: record.position().map_or(0, |p| p.line()),
    })
}

fn read_header<R: Read>(reader: &mut csv::Reader<R>, source: &str) -> Result<Vec<String>> {
    let header = reader
        .byte_headers()
        .map_err(|e| Error::Csv {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    header
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let s = std::str::from_utf8(h).map_err(|_| Error::NonUtf8 {
                source_name: source.to_string(),
                line: 1,
            })?;
            let s = if i == 0 {
                s.trim_start_matches('\u{feff}')
            } else {
                s
            };
            Ok(s.trim().to_ascii_lowercase())
        })
        .collect()
}

fn locate(header: &[String], need_text: bool) -> Result<Columns> {
    let find = |name: &str| header.iter().position(|h| h == name);
    let spans = find("spans").ok_or_else(|| Error::Csv {
        row: 0,
        message: "header has no `spans` column".into(),
    })?;
    let text = find("text");
    if need_text && text.is_none() {
        return Err(Error::Csv {
            row: 0,
            message: "header has no `text` column".into(),
        });
    }
    let id = ID_COLUMNS.iter().find_map(|c| find(c));
    Ok(Columns { spans, text, id })
}

/// Parses a bracketed offset list such as `[0, 1, 2]`.
///
/// Duplicates are dropped with a warning.
pub(crate) fn parse_offset_list(cell: &str, row: u64) -> Result<SpanSet> {
    let cell = cell.trim();
    let inner = cell
        .strip_prefix('[')
        .and_then(|c| c.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidOffset {
            row,
            token: cell.to_string(),
            message: "expected a bracketed list".into(),
        })?;
    let mut offsets = Vec::new();
    if !inner.trim().is_empty() {
        for tok in inner.split(',') {
            let tok = tok.trim();
            let o = tok.parse::<usize>().map_err(|_| Error::InvalidOffset {
                row,
                token: tok.to_string(),
                message: "not a non-negative integer".into(),
            })?;
            offsets.push(o);
        }
    }
    let n = offsets.len();
    let set = SpanSet::from_offsets(offsets);
    if set.len() != n {
        log::warn!("row {row}: dropped {} duplicate offsets", n - set.len());
    }
    Ok(set)
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(source)
}

fn next_record<R: Read>(rdr: &mut csv::Reader<R>, rec: &mut ByteRecord, row: u64) -> Result<bool> {
    rdr.read_byte_record(rec).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => Error::Io(std::io::Error::other(e.to_string())),
        _ => Error::Csv {
            row,
            message: e.to_string(),
        },
    })
}

/// Reads a `spans,text` dataset file. Rows are numbered from 1 after the
/// header; posts without an id column get their row index (from 0) as id.
pub fn parse_dataset<R: Read>(source: R) -> Result<Vec<Post>> {
    parse_dataset_named(source, "dataset")
}

fn parse_dataset_named<R: Read>(source: R, name: &str) -> Result<Vec<Post>> {
    let mut rdr = reader(source);
    let header = read_header(&mut rdr, name)?;
    let cols = locate(&header, true)?;
    let text_col = cols.text.expect("checked by locate");
    let mut posts = Vec::new();
    let mut rec = ByteRecord::new();
    let mut row = 1u64;
    while next_record(&mut rdr, &mut rec, row)? {
        let text = utf8_field(&rec, text_col, row, name)?;
        let gold = parse_offset_list(utf8_field(&rec, cols.spans, row, name)?, row)?;
        let id = match cols.id {
            Some(c) => utf8_field(&rec, c, row, name)?.to_string(),
            None => (row - 1).to_string(),
        };
        let post = Post::new(id, text, gold).map_err(|e| match e {
            Error::OffsetOutOfRange { offset, len, .. } => {
                Error::OffsetOutOfRange { row, offset, len }
            }
            other => other,
        })?;
        posts.push(post);
        row += 1;
    }
    Ok(posts)
}

/// Reads a `spans,text_id` prediction file (as written by [`write_predictions`]).
pub fn read_predictions<R: Read>(source: R) -> Result<Vec<PredictionRecord>> {
    let name = "predictions";
    let mut rdr = reader(source);
    let header = read_header(&mut rdr, name)?;
    let cols = locate(&header, false)?;
    let mut out = Vec::new();
    let mut rec = ByteRecord::new();
    let mut row = 1u64;
    while next_record(&mut rdr, &mut rec, row)? {
        let predicted = parse_offset_list(utf8_field(&rec, cols.spans, row, name)?, row)?;
        let post_id = match cols.id {
            Some(c) => utf8_field(&rec, c, row, name)?.to_string(),
            None => (row - 1).to_string(),
        };
        out.push(PredictionRecord { post_id, predicted });
        row += 1;
    }
    Ok(out)
}

/// Writes predictions as `spans,text_id` CSV with LF line endings.
pub fn write_predictions<W: Write>(records: &[PredictionRecord], sink: W) -> Result<()> {
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(sink);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(["spans", "text_id"]).map_err(io)?;
    for r in records {
        w.write_record([r.predicted.to_string().as_str(), r.post_id.as_str()])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes posts in the dataset's `spans,text` layout (ids are not stored).
pub fn write_dataset<W: Write>(posts: &[Post], sink: W) -> Result<()> {
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(sink);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(["spans", "text"]).map_err(io)?;
    for p in posts {
        w.write_record([p.gold.to_string().as_str(), p.text.as_str()])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE_POSTS: &str = "spans,text\n\
\"[0, 1, 2, 3, 4, 5, 34, 35, 36, 37, 38, 39]\",Stupid hatcheries have completely fucked everything\n\
\"[28, 29, 30, 31, 32, 33, 34]\",Victimitis: You are such an asshole.\n\
[],So is his mother. They are silver spoon parasites.\n\
\"[12, 13, 14, 15, 16]\",You're just silly.\n";

    #[test]
    fn parses_table_rows() {
        let posts = parse_dataset(SAMPLE_POSTS.as_bytes()).unwrap();
        assert_eq!(posts.len(), 4);
        assert_eq!(posts[0].id, "0");
        assert_eq!(posts[0].gold, SpanSet::from_offsets((0..6).chain(34..40)));
        assert_eq!(posts[1].gold, SpanSet::from_offsets(28..35));
        assert!(posts[2].gold.is_empty());
        assert_eq!(
            posts[2].text,
            "So is his mother. They are silver spoon parasites."
        );
        assert_eq!(posts[3].id, "3");
    }

    #[test]
    fn quoted_row_with_empty_gold() {
        let src = "spans,text\n\"[]\",\"So is his mother. They are silver spoon parasites.\"\n";
        let posts = parse_dataset(src.as_bytes()).unwrap();
        assert!(posts[0].gold.is_empty());
    }

    #[test]
    fn embedded_quotes_and_newlines() {
        let src = "spans,text\r\n\"[0]\",\"a \"\"quoted\"\", text\nover lines\"\r\n";
        let posts = parse_dataset(src.as_bytes()).unwrap();
        assert_eq!(posts[0].text, "a \"quoted\", text\nover lines");
    }

    #[test]
    fn offset_beyond_text() {
        let err = parse_dataset("spans,text\n\"[60]\",\"short\"\n".as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            Error::OffsetOutOfRange {
                row: 1,
                offset: 60,
                len: 5
            }
        ));
        assert!(err.to_string().contains("offset 60 exceeds text length 5"));
    }

    #[test]
    fn non_integer_offset_named() {
        let err = parse_dataset("spans,text\n\"[1, x2]\",abc\n".as_bytes()).unwrap_err();
        match err {
            Error::InvalidOffset { row, token, .. } => {
                assert_eq!(row, 1);
                assert_eq!(token, "x2");
            }
            e => panic!("unexpected {e}"),
        }
        assert!(parse_dataset("spans,text\n\"[-1]\",abc\n".as_bytes()).is_err());
    }

    #[test]
    fn malformed_row_reports_row() {
        let err = parse_dataset("spans,text\n[],ok\n[],too,many\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Csv { row: 2, .. }), "{err}");
    }

    #[test]
    fn non_utf8_rejected() {
        let mut src = b"spans,text\n[],caf".to_vec();
        src.push(0xe9);
        src.push(b'\n');
        assert!(matches!(
            parse_dataset(&src[..]),
            Err(Error::NonUtf8 { .. })
        ));
    }

    #[test]
    fn duplicates_are_collapsed() {
        let posts = parse_dataset("spans,text\n\"[2, 1, 1]\",abc\n".as_bytes()).unwrap();
        assert_eq!(posts[0].gold, SpanSet::from_offsets([1, 2]));
    }

    #[test]
    fn id_column_is_used() {
        let posts = parse_dataset("id,spans,text\nabc,[],hello\n".as_bytes()).unwrap();
        assert_eq!(posts[0].id, "abc");
    }

    #[test]
    fn writes_exact_format() {
        let recs = vec![
            PredictionRecord::new("0", SpanSet::from_offsets([0, 1, 2])),
            PredictionRecord::new("1", SpanSet::new()),
        ];
        let mut out = Vec::new();
        write_predictions(&recs, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "spans,text_id\n\"[0, 1, 2]\",0\n[],1\n"
        );
    }

    proptest! {
        #[test]
        fn dataset_round_trip(rows in proptest::collection::vec(("\\PC{1,30}", proptest::collection::vec(0usize..30, 0..10)), 0..8)) {
            let posts: Vec<Post> = rows
                .into_iter()
                .enumerate()
                .map(|(i, (text, offs))| {
                    let n = text.chars().count();
                    let gold = SpanSet::from_offsets(offs.into_iter().filter(|&o| o < n));
                    Post::new(i.to_string(), text, gold).unwrap()
                })
                .collect();
            let mut buf = Vec::new();
            write_dataset(&posts, &mut buf).unwrap();
            let back = parse_dataset(&buf[..]).unwrap();
            prop_assert_eq!(&back, &posts);
            let mut again = Vec::new();
            write_dataset(&back, &mut again).unwrap();
            prop_assert_eq!(again, buf);
        }

        #[test]
        fn predictions_round_trip(
            recs in proptest::collection::vec(
                ("[a-z0-9,\" ]{1,8}", proptest::collection::vec(0usize..500, 0..20)),
                0..10,
            )
        ) {
            let recs: Vec<PredictionRecord> = recs
                .into_iter()
                .map(|(id, offs)| PredictionRecord::new(id, SpanSet::from_offsets(offs)))
                .collect();
            let mut buf = Vec::new();
            write_predictions(&recs, &mut buf).unwrap();
            prop_assert_eq!(read_predictions(&buf[..]).unwrap(), recs);
        }
    }
}
