"""Regenerates bundled_corpus.json from per-subcategory item counts."""
import json
# per-subcategory item counts over 12 recipes (4 dishes x 3 recipes)
rice = {
 "biryani": (["hyderabadi biryani","lucknowi biryani","kolkata biryani","veg dum biryani"], {
   "kewra water":12,"mace":11,"curd":10,"black peppercorn":9,"ginger garlic paste":8,
   "clove":12,"cinnamon":12,"cardamom":12,"ghee":12,"mint leaves":6,"saffron":5,"fried onion":4,
   "bay leaf":6,"onion":8,"green chili":6,"star anise":3,"potato":2}),
 "fried rice": (["egg fried rice","schezwan fried rice","vegetable fried rice","burnt garlic fried rice"], {
   "dark soya sauce":12,"garlic":11,"cabbage":10,"egg":9,"carrot":8,
   "spring onion":7,"vinegar":6,"oil":3,"black pepper":5,"green chili":4,"schezwan sauce":3,"onion":4,"french beans":5}),
 "pulao": (["peas pulao","tawa pulao","methi pulao","kashmiri pulao"], {
   "cumin seed":12,"almond":11,"cashew nut":10,"green pea":9,"coconut":8,
   "clove":12,"cinnamon":10,"cardamom":8,"ghee":5,"bay leaf":6,"raisin":6,"onion":4,"methi leaves":3,"pav bhaji masala":3,"potato":4}),
}
chicken = {
 "indian": (["butter chicken","chicken tikka masala","chicken curry","chicken chettinad"], {
   "chicken":12,"cumin":9,"coriander powder":8,"coriander":7,"cilantro":6,"garam masala":4,
   "chicken leg":6,"chicken thigh":5,"chicken boneless":5,"chicken breast":3,"tomato":4,"onion":4,"ginger garlic paste":4,"butter":3,"cream":3,"turmeric":4}),
 "chinese": (["chilli chicken","kung pao chicken","chicken manchurian","sweet and sour chicken"], {
   "chicken breast":10,"dark soya sauce":9,"corn starch":8,"chicken broth":6,"capsicum":5,
   "chicken":7,"chicken leg":4,"chicken thigh":5,"chicken boneless":5,"garlic":4,"spring onion":4,"vinegar":3,"peanut":2,"pineapple":2,"sesame oil":3}),
}
def build(cat, subs):
    out=[]; off=0
    for sname,(dishes,counts) in subs.items():
        recs=[["salt"] if True else [] for _ in range(12)]
        if cat=="rice":
            for r in recs: r.append("long-grain rice")
        for idx,(item,m) in enumerate(counts.items()):
            o=(idx*5+off)%12
            for j in range(m):
                recs[(o+j)%12].append(item)
        off+=3
        dl=[]
        for d,dish in enumerate(dishes):
            rl=[]
            for k in range(3):
                i=d*3+k
                rid="%s-%d"%(dish.replace(" ","-"), k+1)
                rl.append({"id":rid,"items":recs[i]})
            dl.append({"name":dish,"recipes":rl})
        out.append({"name":sname,"dishes":dl})
    return {"name":cat,"subcategories":out}
doc={"categories":[build("rice",rice),build("chicken",chicken)]}
ids=[r["id"] for c in doc["categories"] for s in c["subcategories"] for d in s["dishes"] for r in d["recipes"]]
assert len(ids)==len(set(ids)),ids
import os
json.dump(doc,open(os.path.join(os.path.dirname(os.path.abspath(__file__)),"bundled_corpus.json"),"w"),indent=2)
