import * as d3 from 'd3';

import type { GraphData, GraphNodeData } from './types.js';

interface SimNode extends d3.SimulationNodeDatum {
  id: string;
  label: string;
  radius: number;
  weight: number;
  mentions: string[];
}

interface SimLink extends d3.SimulationLinkDatum<SimNode> {
  label: string;
}

export interface GraphViewCallbacks {
  onNodeClick?: (node: GraphNodeData) => void;
}

/**
 * Force-directed semantic graph. The layout runs synchronously when data
 * arrives (no animation loop), so rendering is deterministic enough for
 * headless tests; dragging a node just pins it and redraws its edges.
 */
export class GraphView {
  private readonly svg: d3.Selection<SVGSVGElement, unknown, null, undefined>;
  private readonly width: number;
  private readonly height: number;
  private selectedId: string | null = null;
  private data: GraphData = { nodes: [], edges: [] };

  constructor(
    svgElement: SVGSVGElement,
    private readonly callbacks: GraphViewCallbacks = {},
    width = 640,
    height = 420,
  ) {
    this.svg = d3.select(svgElement);
    this.width = width;
    this.height = height;
    this.svg.attr('viewBox', `0 0 ${width} ${height}`);
  }

  render(graph: GraphData): void {
    this.data = graph;
    this.svg.selectAll('*').remove();
    if (graph.nodes.length === 0) {
      this.svg
        .append('text')
        .attr('class', 'empty-state')
        .attr('x', this.width / 2)
        .attr('y', this.height / 2)
        .attr('text-anchor', 'middle')
        .text('No graph for this session yet.');
      return;
    }

    const nodes: SimNode[] = graph.nodes.map((n) => ({
      id: n.id,
      label: n.label,
      radius: n.size / 2,
      weight: n.weight,
      mentions: n.mentions,
    }));
    const links: SimLink[] = graph.edges.map((e) => ({
      source: e.source,
      target: e.target,
      label: e.label,
    }));

    const simulation = d3
      .forceSimulation(nodes)
      .force('charge', d3.forceManyBody().strength(-220))
      .force('link', d3.forceLink<SimNode, SimLink>(links).id((d) => d.id).distance(130))
      .force('center', d3.forceCenter(this.width / 2, this.height / 2))
      .force('collide', d3.forceCollide<SimNode>().radius((d) => d.radius + 6))
      .stop();
    for (let i = 0; i < 200; i++) simulation.tick();

    const defs = this.svg.append('defs');
    defs
      .append('marker')
      .attr('id', 'arrowhead')
      .attr('viewBox', '0 -5 10 10')
      .attr('refX', 10)
      .attr('refY', 0)
      .attr('markerWidth', 7)
      .attr('markerHeight', 7)
      .attr('orient', 'auto')
      .append('path')
      .attr('d', 'M0,-5L10,0L0,5');

    const edgeGroup = this.svg.append('g').attr('class', 'edges');
    const edge = edgeGroup
      .selectAll<SVGGElement, SimLink>('g')
      .data(links)
      .join('g')
      .attr('class', 'edge');
    edge
      .append('line')
      .attr('marker-end', 'url(#arrowhead)')
      .each(function (d) {
        positionEdgeLine(this, d);
      });
    edge
      .append('text')
      .attr('class', 'edge-label')
      .text((d) => d.label)
      .each(function (d) {
        positionEdgeLabel(this, d);
      });

    const nodeGroup = this.svg.append('g').attr('class', 'nodes');
    const node = nodeGroup
      .selectAll<SVGGElement, SimNode>('g')
      .data(nodes)
      .join('g')
      .attr('class', 'node')
      .attr('data-node-id', (d) => d.id)
      .attr('transform', (d) => `translate(${d.x},${d.y})`);
    node
      .append('circle')
      .attr('r', (d) => d.radius)
      .append('title')
      .text((d) => `${d.label} — mentions: ${d.mentions.join(', ')} (weight ${d.weight})`);
    node
      .append('text')
      .attr('class', 'node-label')
      .attr('dy', (d) => -d.radius - 4)
      .attr('text-anchor', 'middle')
      .text((d) => d.label);

    const view = this;
    node.on('click', function (_event, d) {
      view.select(d.id);
    });
    node.call(
      d3
        .drag<SVGGElement, SimNode>()
        .on('drag', function (event, d) {
          d.x = event.x;
          d.y = event.y;
          d3.select(this).attr('transform', `translate(${d.x},${d.y})`);
          edge.each(function (l) {
            positionEdgeLine(this.querySelector('line')!, l);
            positionEdgeLabel(this.querySelector('text')!, l);
          });
        }),
    );
    this.applySelection();
  }

  select(id: string | null): void {
    this.selectedId = id;
    this.applySelection();
    if (id !== null) {
      const data = this.data.nodes.find((n) => n.id === id);
      if (data) this.callbacks.onNodeClick?.(data);
    }
  }

  private applySelection(): void {
    this.svg
      .selectAll<SVGGElement, SimNode>('g.node')
      .classed('selected', (d) => d.id === this.selectedId);
  }
}

function endpoints(link: SimLink): { s: SimNode; t: SimNode } {
  return { s: link.source as SimNode, t: link.target as SimNode };
}

function positionEdgeLine(line: SVGLineElement, link: SimLink): void {
  const { s, t } = endpoints(link);
  // stop the line at the target circle's rim so the arrowhead stays visible
  const dx = (t.x ?? 0) - (s.x ?? 0);
  const dy = (t.y ?? 0) - (s.y ?? 0);
  const length = Math.hypot(dx, dy) || 1;
  const trim = (t.radius + 2) / length;
  line.setAttribute('x1', String(s.x ?? 0));
  line.setAttribute('y1', String(s.y ?? 0));
  line.setAttribute('x2', String((t.x ?? 0) - dx * trim));
  line.setAttribute('y2', String((t.y ?? 0) - dy * trim));
}

function positionEdgeLabel(text: SVGTextElement, link: SimLink): void {
  const { s, t } = endpoints(link);
  text.setAttribute('x', String(((s.x ?? 0) + (t.x ?? 0)) / 2));
  text.setAttribute('y', String(((s.y ?? 0) + (t.y ?? 0)) / 2 - 4));
}
