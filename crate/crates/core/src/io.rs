//! JSON file formats for images (`digifix-image/1`) and maps (`digifix-map/1`).
//!
//! ```json
//! {"format":"digifix-image/1","name":"cycle(4)","dimension":0,"size":4,
//!  "adjacency":{"kind":"explicit","edges":[[0,1],[1,2],[2,3],[0,3]]}}
//! ```
//!
//! `points` is optional; without points, `size` gives the number of
//! vertices. A `cu` adjacency may list `edges`, which must then agree with
//! the coordinates. An `npu` adjacency holds its factors as nested image
//! records.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::image::{AdjacencySpec, DigitalImage, Point};
use crate::selfmap::SelfMap;

pub const IMAGE_FORMAT: &str = "digifix-image/1";
pub const MAP_FORMAT: &str = "digifix-map/1";

fn edges_value(edges: &[(usize, usize)]) -> Value {
    Value::Array(edges.iter().map(|&(a, b)| json!([a, b])).collect())
}

pub fn image_to_value(image: &DigitalImage) -> Value {
    let mut m = Map::new();
    m.insert("format".into(), json!(IMAGE_FORMAT));
    m.insert("name".into(), json!(image.name()));
    m.insert("dimension".into(), json!(image.dimension()));
    match image.points() {
        Some(pts) => {
            m.insert("points".into(), Value::Array(pts.iter().map(|p| json!(p.coords())).collect()));
        }
        None => {
            m.insert("size".into(), json!(image.len()));
        }
    }
    let adjacency = match image.spec() {
        AdjacencySpec::Cu { u } => json!({"kind": "cu", "u": u}),
        AdjacencySpec::Explicit { edges } => json!({"kind": "explicit", "edges": edges_value(edges)}),
        AdjacencySpec::Npu { u, factors } => json!({
            "kind": "npu",
            "u": u,
            "factors": factors.iter().map(image_to_value).collect::<Vec<_>>(),
        }),
    };
    m.insert("adjacency".into(), adjacency);
    Value::Object(m)
}

/// Pretty-printed image record with a trailing newline.
pub fn image_to_string(image: &DigitalImage) -> String {
    let mut s = serde_json::to_string_pretty(&image_to_value(image)).expect("serializable");
    s.push('\n');
    s
}

/// Compact form with sorted keys; the basis of input digests.
pub fn image_canonical(image: &DigitalImage) -> String {
    serde_json::to_string(&image_to_value(image)).expect("serializable")
}

fn field<'v>(obj: &'v Map<String, Value>, ctx: &str, key: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(ctx, format!("missing field `{key}`")))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::parse(ctx, format!("expected a non-negative integer, found {v}")))
}

fn as_array<'v>(v: &'v Value, ctx: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(ctx, format!("expected an array, found {v}")))
}

fn parse_edges(v: &Value, ctx: &str) -> Result<Vec<(usize, usize)>> {
    as_array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let c = format!("{ctx}[{i}]");
            match as_array(e, &c)?.as_slice() {
                [a, b] => Ok((as_usize(a, &c)?, as_usize(b, &c)?)),
                _ => Err(Error::parse(c, "an edge is a pair of indices")),
            }
        })
        .collect()
}

fn parse_points(v: &Value, ctx: &str) -> Result<Vec<Point>> {
    as_array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let c = format!("{ctx}[{i}]");
            as_array(p, &c)?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::parse(&c, format!("expected an integer coordinate, found {x}")))
                })
                .collect::<Result<Vec<i64>>>()
                .map(Point)
        })
        .collect()
}

/// Reads an image record; `ctx` names its position for error messages.
pub fn image_from_value(v: &Value, ctx: &str) -> Result<DigitalImage> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(ctx, "expected an image object"))?;
    let at = |k: &str| format!("{ctx}.{k}");
    let format = field(obj, ctx, "format")?;
    if format.as_str() != Some(IMAGE_FORMAT) {
        return Err(Error::parse(at("format"), format!("expected \"{IMAGE_FORMAT}\", found {format}")));
    }
    let name = field(obj, ctx, "name")?
        .as_str()
        .ok_or_else(|| Error::parse(at("name"), "expected a string"))?;
    let dimension = as_usize(field(obj, ctx, "dimension")?, &at("dimension"))?;
    let points = obj.get("points").map(|p| parse_points(p, &at("points"))).transpose()?;
    if let Some(pts) = &points {
        if let Some((i, p)) = pts.iter().enumerate().find(|(_, p)| p.dim() != dimension) {
            return Err(Error::parse(
                format!("{ctx}.points[{i}]"),
                format!("point has {} coordinates but dimension is {dimension}", p.dim()),
            ));
        }
    }
    let size = match (obj.get("size"), &points) {
        (Some(s), _) => Some(as_usize(s, &at("size"))?),
        (None, Some(p)) => Some(p.len()),
        (None, None) => None,
    };
    if let (Some(s), Some(p)) = (size, &points) {
        if s != p.len() {
            return Err(Error::parse(at("size"), format!("size {s} but {} points", p.len())));
        }
    }
    let adj_ctx = at("adjacency");
    let adj = field(obj, ctx, "adjacency")?
        .as_object()
        .ok_or_else(|| Error::parse(&adj_ctx, "expected an object"))?;
    let kind = field(adj, &adj_ctx, "kind")?.as_str().unwrap_or_default();
    let need_size = || size.ok_or_else(|| Error::parse(ctx, "an image without points needs `size`"));
    match kind {
        "cu" => {
            let u = as_usize(field(adj, &adj_ctx, "u")?, &format!("{adj_ctx}.u"))?;
            let image = DigitalImage::build(name, points, 0, AdjacencySpec::Cu { u })?;
            if let Some(e) = adj.get("edges") {
                let listed = DigitalImage::from_edges("", image.len(), &parse_edges(e, &format!("{adj_ctx}.edges"))?)?;
                if listed.edges() != image.edges() {
                    return Err(Error::Invariant(format!(
                        "{adj_ctx}.edges disagree with c_{u} adjacency on the coordinates"
                    )));
                }
            }
            Ok(image)
        }
        "explicit" => {
            let edges = parse_edges(field(adj, &adj_ctx, "edges")?, &format!("{adj_ctx}.edges"))?;
            DigitalImage::build(name, points, need_size()?, AdjacencySpec::Explicit { edges })
        }
        "npu" => {
            let u = as_usize(field(adj, &adj_ctx, "u")?, &format!("{adj_ctx}.u"))?;
            let fctx = format!("{adj_ctx}.factors");
            let factors = as_array(field(adj, &adj_ctx, "factors")?, &fctx)?
                .iter()
                .enumerate()
                .map(|(i, f)| image_from_value(f, &format!("{fctx}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            DigitalImage::build(name, points, 0, AdjacencySpec::Npu { u, factors })
        }
        other => Err(Error::parse(
            format!("{adj_ctx}.kind"),
            format!("unknown adjacency kind {other:?}; expected \"cu\", \"explicit\" or \"npu\""),
        )),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

pub fn parse_image(text: &str) -> Result<DigitalImage> {
    image_from_value(&parse_json(text)?, "image")
}

pub fn load_image(path: impl AsRef<Path>) -> Result<DigitalImage> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_image(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn save_image(path: impl AsRef<Path>, image: &DigitalImage) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, image_to_string(image)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn map_to_string(f: &SelfMap<'_>) -> String {
    let mut s = serde_json::to_string(&json!({"format": MAP_FORMAT, "targets": f.targets()})).expect("serializable");
    s.push('\n');
    s
}

/// Reads a map record and checks it against `image`.
pub fn parse_map<'a>(text: &str, image: &'a DigitalImage) -> Result<SelfMap<'a>> {
    let v = parse_json(text)?;
    let obj = v.as_object().ok_or_else(|| Error::parse("map", "expected a map object"))?;
    let format = field(obj, "map", "format")?;
    if format.as_str() != Some(MAP_FORMAT) {
        return Err(Error::parse("map.format", format!("expected \"{MAP_FORMAT}\", found {format}")));
    }
    let targets = as_array(field(obj, "map", "targets")?, "map.targets")?
        .iter()
        .enumerate()
        .map(|(i, t)| as_usize(t, &format!("map.targets[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    SelfMap::new(image, targets)
}

pub fn load_map<'a>(path: impl AsRef<Path>, image: &'a DigitalImage) -> Result<SelfMap<'a>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_map(&text, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cube, cycle, fig_sexample, interval};
    use crate::image::product;

    #[test]
    fn round_trips() {
        let imgs = [
            cycle(7).unwrap(),
            cube(),
            fig_sexample(),
            product(&[interval(0, 1).unwrap(), cycle(3).unwrap()], 2).unwrap(),
        ];
        for img in imgs {
            let back = parse_image(&image_to_string(&img)).unwrap();
            assert_eq!(back, img);
        }
    }

    #[test]
    fn cube_file() {
        let text = r#"{"format":"digifix-image/1","name":"cube","dimension":3,
            "points":[[0,0,0],[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]],
            "adjacency":{"kind":"cu","u":1}}"#;
        let img = parse_image(text).unwrap();
        assert_eq!((img.len(), img.edge_count()), (8, 12));
    }

    #[test]
    fn rejects_bad_input() {
        let bad_kind = r#"{"format":"digifix-image/1","name":"x","dimension":0,"size":2,
            "adjacency":{"kind":"tensor","edges":[]}}"#;
        assert!(matches!(parse_image(bad_kind), Err(Error::Parse { .. })));

        // a discrete circle read with c_1 does not have the listed cycle edges
        let mismatch = r#"{"format":"digifix-image/1","name":"c4","dimension":2,
            "points":[[0,0],[1,1],[2,0],[1,-1]],
            "adjacency":{"kind":"cu","u":1,"edges":[[0,1],[1,2],[2,3],[3,0]]}}"#;
        assert!(matches!(parse_image(mismatch), Err(Error::Invariant(_))));
        let ok = mismatch.replace("\"u\":1", "\"u\":2");
        assert_eq!(parse_image(&ok).unwrap().edge_count(), 4);

        match parse_image("{\"format\": 3,\n") {
            Err(Error::Parse { context, .. }) => assert!(context.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
        let no_size = r#"{"format":"digifix-image/1","name":"x","dimension":0,
            "adjacency":{"kind":"explicit","edges":[]}}"#;
        assert!(matches!(parse_image(no_size), Err(Error::Parse { .. })));
        let bad_edge = r#"{"format":"digifix-image/1","name":"x","dimension":0,"size":2,
            "adjacency":{"kind":"explicit","edges":[[0,1,2]]}}"#;
        match parse_image(bad_edge) {
            Err(Error::Parse { context, .. }) => assert_eq!(context, "image.adjacency.edges[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn maps() {
        let c5 = cycle(5).unwrap();
        let f = SelfMap::new(&c5, vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(parse_map(&map_to_string(&f), &c5).unwrap(), f);
        assert!(parse_map(r#"{"format":"digifix-map/1","targets":[0,1]}"#, &c5).is_err());
    }
}
