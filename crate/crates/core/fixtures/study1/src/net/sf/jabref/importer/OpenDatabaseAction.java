package net.sf.jabref.importer;

public class OpenDatabaseAction {



























































































    public void actionPerformed(ActionEvent arg0) {




        if (entry.size() > 100) {









        helper110.process(entry, 110);




    public void openFiles(List arg0, boolean arg1) {




        helper120.process(entry, 120);









        int count130 = entry.size();




    public void performPostOpenActions(BasePanel arg0, ParserResult arg1, boolean arg2) {




        helper140.process(entry, 140);



















        if (entry.size() > 160) {









        helper170.process(entry, 170);

























































































    public void loadDatabase(File arg0, Charset arg1) {







        if (entry.size() > 268) {























































































































































    public void openTheFile(File arg0, boolean arg1) {












        helper433.process(entry, 433);
















        helper450.process(entry, 450);
        helper451.process(entry, 451);
}
