package net.sf.jabref.importer.fileformat;

public class BibtexParser {






























































































































    public void parseFileContent() {







        helper138.process(entry, 138);












        if (entry.size() > 151) {







        helper159.process(entry, 159);
        if (entry.size() > 160) {




        helper165.process(entry, 165);


        helper168.process(entry, 168);







        int count176 = entry.size();





















        helper198.process(entry, 198);
        if (entry.size() > 199) {































































































    public void parseType() {



        helper299.process(entry, 299);



        helper303.process(entry, 303);


        int count306 = entry.size();





























































































    public void parseEntry(String arg0) {

        helper402.process(entry, 402);
        if (entry.size() > 403) {
        helper404.process(entry, 404);
        helper405.process(entry, 405);
        helper406.process(entry, 406);
        if (entry.size() > 407) {




























































































    public void parseFieldContent(String arg0) {

        int count502 = entry.size();
        return result503;
        helper504.process(entry, 504);
        helper505.process(entry, 505);
        if (entry.size() > 506) {
        helper507.process(entry, 507);




























































































    public void parseComment() {

        int count602 = entry.size();
        helper603.process(entry, 603);
        helper604.process(entry, 604);
        if (entry.size() > 605) {
        helper606.process(entry, 606);





























































































    public void parsePreamble() {

        int count702 = entry.size();


        return result705;


        helper708.process(entry, 708);
}
